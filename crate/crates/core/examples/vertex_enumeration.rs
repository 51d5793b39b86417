//! Vertex enumeration of a small rate polytope and its projection onto
//! user rates.

use cogrates::polytope::{convex_hull_2d, enumerate_vertices, project, HalfspaceSystem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // split rates (a, b, c): user 1 sends a + b, user 2 sends c
    let sys = HalfspaceSystem::new(
        3,
        vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 1.0, 1.0],
            vec![0.0, 1.0, 1.0],
        ],
        vec![1.0, 0.8, 1.2, 2.2, 1.5],
    )?;
    let verts = enumerate_vertices(&sys)?;
    println!("{} vertices", verts.len());
    for v in &verts {
        println!("  ({:.3}, {:.3}, {:.3})", v[0], v[1], v[2]);
    }

    let map = vec![vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
    let pts: Vec<[f64; 2]> = project(&verts, &map)?.iter().map(|p| [p[0], p[1]]).collect();
    println!("projected hull:");
    for p in convex_hull_2d(&pts)? {
        println!("  r1 = {:.3}, r2 = {:.3}", p[0], p[1]);
    }
    Ok(())
}
