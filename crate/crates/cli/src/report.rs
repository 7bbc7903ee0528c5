use std::io::Write;

use mahler_core::IdentityReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub fn emit(out: &mut dyn Write, reports: &[IdentityReport], format: Format) -> std::io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, reports)?;
            writeln!(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            if reports.is_empty() {
                w.write_record(["id", "citation", "lhs", "rhs", "abs_diff", "tol", "pass", "elapsed_s"])?;
            }
            for r in reports {
                w.serialize(r)?;
            }
            w.flush()
        }
        Format::Text => {
            let width = reports.iter().map(|r| r.id.len()).max().unwrap_or(0);
            for r in reports {
                let diff = r.abs_diff.map_or_else(|| "-".to_string(), |d| format!("{d:.2e}"));
                writeln!(
                    out,
                    "{} {:width$}  lhs={}  rhs={}  |diff|={diff}  tol={:.0e}  {:.2}s",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.id,
                    r.lhs_value,
                    r.rhs_value,
                    r.tol,
                    r.elapsed,
                )?;
            }
            let failed = reports.iter().filter(|r| !r.pass).count();
            writeln!(out, "{} passed, {failed} failed", reports.len() - failed)
        }
    }
}
