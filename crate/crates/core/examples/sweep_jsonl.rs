//! A seeded sweep run in-process, exactly as `qheine sweep` would.
//!
//!     cargo run --example sweep_jsonl

use qheine::cli::config::{OutputFormat, SweepConfig};
use qheine::cli::sweep::{run_reports, write_reports};
use qheine::IdentityName;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SweepConfig::from_toml(
        r#"
        identity = ["heine", "q-gauss", "gauss-exact"]
        samples = 3
        seed = 42
        q = "0.5"
        "#,
    )?;
    let (reports, summary) = run_reports(&cfg)?;
    let mut out = std::io::stdout().lock();
    write_reports(&reports, OutputFormat::Jsonl, &mut out)?;
    eprintln!("{summary:?}");

    let csv_cfg = SweepConfig {
        identities: vec![IdentityName::Abel],
        format: OutputFormat::Csv,
        ..cfg
    };
    let (reports, _) = run_reports(&csv_cfg)?;
    write_reports(&reports, csv_cfg.format, &mut out)?;

    // same seed, same bytes
    let (again, _) = run_reports(&csv_cfg)?;
    assert_eq!(reports, again);
    Ok(())
}
