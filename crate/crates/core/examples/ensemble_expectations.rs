//! Classical density matrix: field and polynomial expectations match ensemble means.

use fockbridge::bridge::{density_from_ensemble, expect_field, expect_normal, verify_normal};
use fockbridge::classical::{sample_ensemble, ClassicalState, DistributionSpec};
use fockbridge::fock::FockBasis;
use fockbridge::symbolic::parse_phipi;

fn main() -> fockbridge::Result<()> {
    let mean = ClassicalState::new(vec![0.6, -0.2], vec![0.1, 0.4])?;
    let e = sample_ensemble(&DistributionSpec::gaussian(mean, vec![0.2; 2], vec![0.2; 2], 5), 300)?;
    let basis = FockBasis::new(2, 16)?;
    let rho = density_from_ensemble(&e, basis)?;
    println!("trace = {:.12}, rank = {}", rho.trace(), rho.rank(1e-12));

    let field = expect_field(&rho, 1)?;
    println!("Tr(rho Phi_1) = {:.12}, <phi_1> = {:.12}", field.value, e.mean(|s| s.phi[0]));

    let g = parse_phipi("phi[1]^2*pi[2] - pi[1]^3 + 2", Some(2))?;
    println!("Tr(rho g_n) = {:.12}", expect_normal(&rho, &g)?);
    let report = verify_normal(&e, &g, basis)?;
    println!("gap {:.2e} within {:.2e}: {}", report.abs_gap, report.tolerance, report.passed);
    Ok(())
}
