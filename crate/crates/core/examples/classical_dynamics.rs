//! Integrate a quartic oscillator and evolve a sampled ensemble.

use fockbridge::classical::{
    energy, evolve_ensemble, integrate, sample_ensemble, ClassicalState, DistributionSpec, HamiltonianSpec, Method,
};

fn main() -> fockbridge::Result<()> {
    let h = HamiltonianSpec::parse("(phi[1]^2 + pi[1]^2)/2 + 1/10*phi[1]^4", 1)?;
    let s0 = ClassicalState::single(1.0, 0.0);
    let traj = integrate(&h, &s0, 10.0, 1e-3, Method::ImplicitMidpoint)?;
    let end = traj.final_state();
    println!("steps: {}, final state: {:?}", traj.len() - 1, end);
    println!("energy drift: {:.2e}", (energy(&h, end)? - energy(&h, &s0)?).abs());

    let d = DistributionSpec::gaussian(s0, vec![0.1], vec![0.1], 7);
    let e = sample_ensemble(&d, 100)?;
    let later = evolve_ensemble(&h, &e, 1.0, 1e-3, Method::ImplicitMidpoint)?;
    println!("<phi>(0) = {:.6}, <phi>(1) = {:.6}", e.mean(|s| s.phi[0]), later.mean(|s| s.phi[0]));
    print!("{}", traj.to_csv().lines().take(3).collect::<Vec<_>>().join("\n"));
    println!();
    Ok(())
}
