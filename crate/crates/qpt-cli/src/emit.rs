//! Table emission: CSV (17 significant digits, LF, masked cells as literal
//! `MASKED:<code>` tokens) and JSON (shortest round-trip numbers).

use std::io::Write;

use qpt_core::sweep::{Cell, SweepResult};

use crate::config::LogScale;
use crate::CliError;

/// Columns that are already dimensionless ratios keep their raw values under
/// every log scale.
fn exempt_from_scale(name: &str) -> bool {
    name.starts_with("ratio_")
}

/// Applies the emission transform; None marks a value outside the transform's
/// domain (rendered as a masked cell).
fn transform(scale: LogScale, v: f64) -> Option<f64> {
    match scale {
        LogScale::None => Some(v),
        LogScale::Log4 => (v > 0.0).then(|| v.ln() / 4.0f64.ln()),
        LogScale::LgNfSplit => Some(if v >= 0.0 { (v + 1.0).log10() } else { -((-v) + 1.0).log10() }),
        LogScale::Log10Plus1 => (v >= -1.0).then(|| (v + 1.0).log10()),
    }
}

fn scaled_cell(scale: LogScale, name: &str, cell: Cell) -> Result<f64, &'static str> {
    match cell {
        Cell::Masked(code) => Err(code),
        Cell::Value(v) => {
            if exempt_from_scale(name) {
                return Ok(v);
            }
            transform(scale, v).ok_or("LogDomain")
        }
    }
}

/// 17 significant digits: round-trip exact for every finite f64.
fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv(out: &mut dyn Write, res: &SweepResult, scale: LogScale) -> std::io::Result<()> {
    let mut header: Vec<&str> = res.axes.iter().map(|a| a.name).collect();
    header.extend(res.columns.iter().map(|c| c.name));
    header.push("mask");
    out.write_all(header.join(",").as_bytes())?;
    out.write_all(b"\n")?;
    for r in 0..res.rows() {
        let mut fields: Vec<String> = res.coords(r).into_iter().map(fmt17).collect();
        for col in &res.columns {
            fields.push(match scaled_cell(scale, col.name, col.cells[r]) {
                Ok(v) => fmt17(v),
                Err(code) => format!("MASKED:{code}"),
            });
        }
        fields.push(res.row_mask(r).unwrap_or("ok").to_string());
        out.write_all(fields.join(",").as_bytes())?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_json(
    out: &mut dyn Write,
    res: &SweepResult,
    scale: LogScale,
    config_echo: serde_json::Value,
    assumptions: &[String],
) -> std::io::Result<()> {
    let axes: Vec<serde_json::Value> = res
        .axes
        .iter()
        .map(|a| serde_json::json!({ "name": a.name, "values": a.values }))
        .collect();
    let columns: Vec<serde_json::Value> = res
        .columns
        .iter()
        .map(|c| {
            let values: Vec<serde_json::Value> = c
                .cells
                .iter()
                .map(|cell| match scaled_cell(scale, c.name, *cell) {
                    Ok(v) => serde_json::json!(v),
                    Err(code) => serde_json::json!(format!("MASKED:{code}")),
                })
                .collect();
            serde_json::json!({ "name": c.name, "values": values })
        })
        .collect();
    let doc = serde_json::json!({
        "axes": axes,
        "columns": columns,
        "meta": {
            "observable_set": res.meta.observable_set,
            "kappa": res.meta.kappa,
            "alpha": res.meta.alpha,
            "pump_phase": res.meta.pump_phase,
            "b_values": res.meta.b_values,
            "masked_points": res.meta.masked_points,
            "version": res.meta.version,
            "assumptions": assumptions,
            "config": config_echo,
        },
    });
    serde_json::to_writer(&mut *out, &doc)?;
    out.write_all(b"\n")
}

/// Writes the table to `path` ("-" for stdout) and returns the row count.
pub fn emit(
    path: &str,
    res: &SweepResult,
    scale: LogScale,
    format: crate::config::Format,
    config_echo: serde_json::Value,
    assumptions: &[String],
) -> Result<usize, CliError> {
    let write_to = |w: &mut dyn Write| -> std::io::Result<()> {
        match format {
            crate::config::Format::Csv => write_csv(w, res, scale),
            crate::config::Format::Json => write_json(w, res, scale, config_echo.clone(), assumptions),
        }
    };
    let io_err = |e: std::io::Error| CliError::Io(format!("writing {path}: {e}"));
    if path == "-" {
        let stdout = std::io::stdout();
        let mut lock = stdout.lock();
        write_to(&mut lock).map_err(io_err)?;
    } else {
        let mut file = std::io::BufWriter::new(
            std::fs::File::create(path).map_err(|e| CliError::Io(format!("creating {path}: {e}")))?,
        );
        write_to(&mut file).map_err(io_err)?;
        file.flush().map_err(io_err)?;
    }
    Ok(res.rows())
}
