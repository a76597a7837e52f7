//! Writes the fig7 preset as CSV plus an SVG overlay into a temp directory,
//! then re-reads one file and verifies it again.

use slag_forge::io::{trace_from_csv, trace_to_csv, traces_to_svg};
use slag_forge::presets::{preset_traces, verify_all};
use slag_forge::slag::verify_slag;

fn main() -> slag_forge::Result<()> {
    let dir = std::env::temp_dir().join("slag-forge-fig7");
    std::fs::create_dir_all(&dir)?;
    let mut traces = preset_traces("fig7")?;
    let reports = verify_all(&mut traces);
    let mut first = None;
    for (i, (t, r)) in traces.iter().zip(reports).enumerate() {
        let csv = trace_to_csv(t, &r?)?;
        std::fs::write(dir.join(format!("fig7_{i:03}.csv")), &csv)?;
        first.get_or_insert(csv);
    }
    std::fs::write(dir.join("fig7.svg"), traces_to_svg("fig7", &traces))?;
    println!("wrote {} traces to {}", traces.len(), dir.display());

    let again = trace_from_csv(&first.unwrap())?;
    let s = verify_slag(&again, 0.0)?.summary;
    println!("re-read {}: omega={:.1e} imOmega={:.1e} mu={:.1e}", again.param_string(), s.omega, s.im_omega, s.mu);
    Ok(())
}
