//! Generators of standalone matplotlib scripts for sweep CSV files.
//!
//! A script takes the CSV path and an output image path on its command line
//! and uses only the Python standard library besides matplotlib.

use std::str::FromStr;

use crate::error::{config_error, AppError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// Current against chain length on log-log axes, one series per model and dephasing rate.
    Size,
    /// Current against left bath temperature, one series per model, size and dephasing rate.
    Temperature,
    /// Heatmap of the largest negativity over `(s₁, s_N)`.
    Region,
}

impl FromStr for PlotKind {
    type Err = AppError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "size" => Ok(Self::Size),
            "temperature" => Ok(Self::Temperature),
            "region" => Ok(Self::Region),
            other => Err(config_error(format!(
                "unknown plot kind `{other}` (expected size, temperature or region)"
            ))),
        }
    }
}

const PRELUDE: &str = r##"import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_rows(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(line for line in f if not line.startswith("#")))


src = sys.argv[1] if len(sys.argv) > 1 else "{csv}"
dst = sys.argv[2] if len(sys.argv) > 2 else "{png}"
rows = read_rows(src)
fig, ax = plt.subplots(figsize=(6, 4.5))
"##;

const SERIES: &str = r#"
series = {}
for r in rows:
    if not r["current"]:
        continue
    label = r["model"]
    if r["dephasing"]:
        label += " γ=" + r["dephasing"]
    if EXTRA_KEY:
        label += " N=" + r["n_sites"]
    series.setdefault(label, []).append((float(r[X_KEY]), float(r["current"])))
for label, pts in series.items():
    pts.sort()
    ax.plot([p[0] for p in pts], [p[1] for p in pts], "o-", label=label)
"#;

const SIZE: &str = r#"X_KEY = "n_sites"
EXTRA_KEY = False
SERIES
ax.set_xscale("log")
ax.set_yscale("log")
ax.set_xlabel("N")
ax.set_ylabel("J")
ax.legend(fontsize="small")
"#;

const TEMPERATURE: &str = r#"X_KEY = "t_left"
EXTRA_KEY = True
SERIES
ax.set_xlabel("T_1")
ax.set_ylabel("J")
ax.legend(fontsize="small")
"#;

const REGION: &str = r#"s = sorted({float(r["s_left"]) for r in rows})
index = {v: k for k, v in enumerate(s)}
grid = [[0.0] * len(s) for _ in s]
for r in rows:
    grid[index[float(r["s_right"])]][index[float(r["s_left"])]] = float(r["max_negativity"])
step = s[1] - s[0] if len(s) > 1 else 0.5
extent = (s[0] - step / 2, s[-1] + step / 2, s[0] - step / 2, s[-1] + step / 2)
im = ax.imshow(grid, origin="lower", extent=extent, cmap="viridis")
fig.colorbar(im, ax=ax, label="negativity")
ax.set_xlabel("s_1")
ax.set_ylabel("s_N")
"#;

const EPILOGUE: &str = r#"fig.tight_layout()
fig.savefig(dst, dpi=150)
"#;

/// Python source plotting `csv_path` into `png_path` (both overridable from
/// the script's command line).
pub fn plot_script(kind: PlotKind, csv_path: &str, png_path: &str) -> String {
    let body = match kind {
        PlotKind::Size => SIZE.replace("SERIES", SERIES),
        PlotKind::Temperature => TEMPERATURE.replace("SERIES", SERIES),
        PlotKind::Region => REGION.to_owned(),
    };
    let prelude = PRELUDE
        .replace("{csv}", &python_escape(csv_path))
        .replace("{png}", &python_escape(png_path));
    format!("{prelude}{body}{EPILOGUE}")
}

fn python_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
