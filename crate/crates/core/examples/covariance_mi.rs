//! Builds the joint covariance for one coding-parameter draw and evaluates a
//! few conditional mutual informations, checked against Monte Carlo.

use cogrates::dmc::gaussian_mi_mc;
use cogrates::gauss::{assemble_covariance, conditional_mi, differential_entropy, Var};
use cogrates::model::{ChannelConfig, GpParams, Scheme};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ChannelConfig::default();
    let params = GpParams { tau: 0.5, kappa: 0.4, alpha: [1.0, 0.3, -0.2, 0.5], beta: [0.1, 0.2] };
    let table = assemble_covariance(&cfg, &params, Scheme::Cums2)?;

    println!("labels: {:?}", table.labels());
    println!("Var(Y1) = {}", table.get(Var::Y1, Var::Y1)?);
    println!("Cov(U1, W) = {}", table.get(Var::U1, Var::W)?);
    println!("h(Y1) = {:.6} bits", differential_entropy(&table, &[Var::Y1])?);

    let terms: [(&[Var], &[Var], &[Var]); 3] = [
        (&[Var::W], &[Var::Y1], &[]),
        (&[Var::U1], &[Var::Y2], &[Var::W]),
        (&[Var::V1, Var::V3], &[Var::Y3], &[Var::U2]),
    ];
    for (i, (a, b, c)) in terms.iter().enumerate() {
        let exact = conditional_mi(&table, a, b, c)?;
        let est = gaussian_mi_mc(&table, a, b, c, 200_000, i as u64)?;
        println!("I({a:?}; {b:?} | {c:?}) = {exact:.5}  (MC {:.5} +- {:.5})", est.mean, est.std_err);
    }
    Ok(())
}
