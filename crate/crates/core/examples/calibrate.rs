//! Score and screen cutoffs for uniform-random subjects on all menus of two to
//! four out of six alternatives.
//!
//! Usage: `cargo run --release --example calibrate -- [subjects] [seed]`

use std::time::Instant;

use revpref::dataset::generate_menu_collection;
use revpref::exec::Execution;
use revpref::models::ModelKind;
use revpref::simulation::{calibrate_scores, calibrate_screens, simulate_uniform, SimConfig};

fn main() -> revpref::Result<()> {
    let mut args = std::env::args().skip(1);
    let subjects: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(10_000);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let mc = generate_menu_collection(6, &[2, 3, 4])?;
    for forced in [false, true] {
        let start = Instant::now();
        let cfg = SimConfig::new(mc.clone(), subjects, forced, seed)?;
        let data = simulate_uniform(&cfg, Execution::Parallel);
        let kinds: &[ModelKind] = if forced {
            &[ModelKind::RationalChoice, ModelKind::UndominatedChoice]
        } else {
            &ModelKind::ALL
        };
        let screens = calibrate_screens(&data, 2.5)?;
        println!(
            "{} choose-everything {} first-item {:.3} position {:.3}",
            if forced { "forced" } else { "non-forced" },
            screens.choose_everything.value,
            screens.first_item.value,
            screens.position.value
        );
        for kind in kinds {
            let t = Instant::now();
            let c = calibrate_scores(&data, &[*kind], 2.5, Execution::Parallel)?;
            println!("  {kind}: min {} 2.5pct {} ({:.1?})", c[0].lower.minimum, c[0].lower.value, t.elapsed());
        }
        println!("  total {:.1?}", start.elapsed());
    }
    Ok(())
}
