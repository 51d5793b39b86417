//! Prints the symbolic rate constraints of a scheme, optionally evaluated at
//! one random Gaussian parameter draw.
//!
//! cargo run --example constraint_dump -- cums2

use cogrates::constraints::{build_system, evaluate_system};
use cogrates::gauss::assemble_covariance;
use cogrates::model::{ChannelConfig, GpParams, Scheme};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scheme: Scheme = std::env::args().nth(1).unwrap_or_else(|| "cums2".into()).parse()?;
    let sys = build_system(scheme);
    print!("{}", sys.dump());

    if scheme.has_gaussian_form() {
        let params = GpParams { tau: 0.5, kappa: 0.5, alpha: [0.3, 0.2, 0.1, 0.4], beta: [0.2, 0.1] };
        let table = assemble_covariance(&ChannelConfig::default(), &params, scheme)?;
        let num = evaluate_system(&sys, &table)?;
        println!("\nat {params:?} (feasible: {})", num.feasible);
        for (row, b) in num.a.iter().zip(&num.b) {
            println!("{row:?} <= {b:.6}");
        }
    }
    Ok(())
}
