//! Residual report for every identity suite.

fn main() -> qtree::error::Result<()> {
    for s in qtree::checks::run_identity_suites()? {
        println!(
            "{:<6} {:<52} n = {:<4} worst = {:.2e} tol = {:.0e}",
            if s.passed { "ok" } else { "FAILED" },
            s.name,
            s.samples,
            s.worst,
            s.tol
        );
    }
    Ok(())
}
