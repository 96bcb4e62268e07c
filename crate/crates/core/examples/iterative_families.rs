//! Traces the three iterative expander families: bound recurrences, their
//! limits, and measured eigenvalues of the levels small enough to build.
//!
//! cargo run --release --example iterative_families -- [levels]

use expander_codes::iterate::{recurrence_fixed_point, run_family, FamilyKind, IterateConfig, Recurrence, SeedShape};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let levels: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(3);
    let ideal = [
        ("zz, lambda_H = 1/5", Recurrence::Zigzag { lambda_h: 0.2 }),
        ("zzm, lambda = 0.296", Recurrence::ZigzagModified { lambda: 0.296 }),
        ("rep, lambda1 = lambda2 = 0.2, d = 6", Recurrence::Replacement { lambda1: 0.2, lambda2: 0.2, d: 6, power: 4 }),
    ];
    for (name, r) in ideal {
        let seq: Vec<String> = r.sequence(6)?.iter().map(|x| format!("{x:.4}")).collect();
        println!("{name}: {} -> limit {:.4}", seq.join(", "), recurrence_fixed_point(&r)?);
    }
    for family in [FamilyKind::ZigzagOriginal, FamilyKind::ZigzagModified] {
        let cfg = IterateConfig { levels, ..Default::default() };
        let trace = run_family(family, SeedShape::default_for(family), &cfg)?;
        println!("{family:?}: seed lambda {:.4}, precondition {}", trace.seed_lambda, trace.precondition);
        for l in &trace.levels {
            println!(
                "  level {}: {} left vertices, degree {}, bound {:.4}, measured {}",
                l.level,
                l.num_left,
                l.left_degree,
                l.lambda_bound,
                l.measured_lambda.map_or("-".into(), |m| format!("{m:.4}"))
            );
        }
    }
    Ok(())
}
