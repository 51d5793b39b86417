//! Evaluates CuMS2 exactly on a noiseless discrete channel where each
//! receiver sees only its own sender, then on a random pmf with the same
//! factorization.

use std::collections::HashMap;

use cogrates::dmc::{build_from_chain, check_factorization, evaluate_scheme_discrete, random_chain_pmf, FactorizationSpec};
use cogrates::gauss::Var::{self, *};
use cogrates::model::Scheme;
use cogrates::polytope::{enumerate_vertices, project};

fn one_hot(n: usize, k: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[k] = 1.0;
    v
}

fn report(pmf: &cogrates::dmc::JointPmf, spec: &FactorizationSpec) -> Result<(), Box<dyn std::error::Error>> {
    let scheme = Scheme::Cums2;
    println!("  factorization holds: {}", check_factorization(pmf, spec)?.holds);
    let num = evaluate_scheme_discrete(pmf, scheme)?;
    if !num.feasible {
        println!("  infeasible: some bound is negative");
        return Ok(());
    }
    let verts = enumerate_vertices(&num.halfspaces()?)?;
    let rates = project(&verts, &scheme.projection())?;
    let best: Vec<f64> = (0..3).map(|k| rates.iter().map(|r| r[k]).fold(0.0, f64::max)).collect();
    println!("  {} vertices, largest r1, r2, r3 = {best:?}", verts.len());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = FactorizationSpec::for_scheme(Scheme::Cums2);
    let sizes: HashMap<Var, usize> =
        [(Q, 1), (W, 2), (X1, 2), (U1, 2), (U2, 2), (X2, 4), (V1, 2), (V3, 2), (X3, 4), (Y1, 2), (Y2, 4), (Y3, 4)]
            .into_iter()
            .collect();
    let labels: Vec<(Var, usize)> = spec.labels().into_iter().map(|v| (v, sizes[&v])).collect();
    let pos: HashMap<Var, usize> = labels.iter().enumerate().map(|(i, l)| (l.0, i)).collect();

    let pmf = build_from_chain(&labels, &spec, |k, idx| {
        let at = |v: Var| idx[pos[&v]];
        match spec.factors[k].targets.as_slice() {
            [Q] => vec![1.0],
            [W, X1] => vec![0.5, 0.0, 0.0, 0.5],
            [X2] => one_hot(4, 2 * at(U1) + at(U2)),
            [X3] => one_hot(4, 2 * at(V1) + at(V3)),
            [Y1, Y2, Y3] => one_hot(32, (at(X1) * 4 + at(X2)) * 4 + at(X3)),
            _ => vec![0.5, 0.5],
        }
    })?;
    println!("noiseless, no interference:");
    report(&pmf, &spec)?;

    println!("random conditionals:");
    report(&random_chain_pmf(&labels, &spec, 17)?, &spec)?;
    Ok(())
}
