//! Atomic file output and plot-script generation.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{KickError, Result};

use super::experiments::ScenarioOutput;

/// File name of the generated plotting script.
pub const PLOT_SCRIPT: &str = "plot.py";

/// Writes `contents` to `dir/name` through a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, contents: &[u8]) -> Result<PathBuf> {
    let target = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp"));
    fs::write(&tmp, contents)?;
    if let Err(e) = fs::rename(&tmp, &target) {
        let _ = fs::remove_file(&tmp);
        return Err(e.into());
    }
    Ok(target)
}

/// Writes `report.json` and every CSV of a run into `dir`, creating it if needed.
pub fn write_outputs(dir: &Path, output: &ScenarioOutput) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::with_capacity(output.files.len() + 1);
    for (name, contents) in &output.files {
        written.push(write_atomic(dir, name, contents.as_bytes())?);
    }
    written.push(write_atomic(dir, "report.json", output.report.to_json().as_bytes())?);
    Ok(written)
}

/// Pairs `(stem, label)` of curves to overlay in one panel, in draw order.
fn panels(csvs: &[String]) -> Vec<Vec<(String, &'static str)>> {
    let has = |s: &str| csvs.iter().any(|c| c == &format!("{s}.csv"));
    let mut used: Vec<String> = Vec::new();
    let mut out = Vec::new();
    let mut group = |members: Vec<(&str, &'static str)>, used: &mut Vec<String>| {
        let present: Vec<(String, &'static str)> = members
            .into_iter()
            .filter(|(s, _)| has(s))
            .map(|(s, l)| (s.to_string(), l))
            .collect();
        if present.len() > 1 {
            used.extend(present.iter().map(|(s, _)| s.clone()));
            out.push(present);
        }
    };
    group(vec![("far_field", "simulated"), ("sinc2", "analytic")], &mut used);
    for csv in csvs {
        let stem = csv.trim_end_matches(".csv");
        if let Some(base) = stem.strip_suffix("_before") {
            group(vec![(stem, "before"), (&format!("{base}_after"), "after")], &mut used);
        }
    }
    for csv in csvs {
        let stem = csv.trim_end_matches(".csv").to_string();
        if !used.contains(&stem) {
            out.push(vec![(stem, "")]);
        }
    }
    out
}

/// Writes a matplotlib script that plots every CSV in `dir`.
///
/// Before/after pairs are overlaid (before dashed, after solid) and a
/// simulated far field is drawn over its analytic curve. Fails without
/// writing anything when `dir` holds no CSV files.
pub fn emit_plot_script(dir: &Path) -> Result<PathBuf> {
    let mut csvs: Vec<String> = fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".csv") && !n.starts_with('.'))
        .collect();
    csvs.sort();
    if csvs.is_empty() {
        return Err(KickError::InvalidConfig(format!(
            "no CSV files to plot in {}",
            dir.display()
        )));
    }
    let panels = panels(&csvs);
    let mut py = String::from(
        "#!/usr/bin/env python3\n\
         \"\"\"Plots the CSV outputs of a kicklab run. Usage: python3 plot.py\"\"\"\n\
         import csv\n\
         import os\n\n\
         import matplotlib\n\n\
         matplotlib.use(\"Agg\")\n\
         import matplotlib.pyplot as plt\n\n\
         HERE = os.path.dirname(os.path.abspath(__file__))\n\n\n\
         def load(stem):\n    \
             with open(os.path.join(HERE, stem + \".csv\")) as fh:\n        \
                 rows = list(csv.reader(fh))\n    \
             header, body = rows[0], rows[1:]\n    \
             cols = [[float(r[i]) for r in body] for i in range(len(header))]\n    \
             return header, cols\n\n\n\
         PANELS = [\n",
    );
    for panel in &panels {
        let items: Vec<String> = panel.iter().map(|(s, l)| format!("(\"{s}\", \"{l}\")")).collect();
        py.push_str(&format!("    [{}],\n", items.join(", ")));
    }
    py.push_str(
        "]\n\n\
         fig, axes = plt.subplots(len(PANELS), 1, figsize=(8, 3 * len(PANELS)), squeeze=False)\n\
         for ax, panel in zip(axes[:, 0], PANELS):\n    \
             for stem, label in panel:\n        \
                 header, cols = load(stem)\n        \
                 style = \"--\" if label in (\"before\", \"analytic\") else \"-\"\n        \
                 for name, ys in zip(header[1:], cols[1:]):\n            \
                     tag = name if not label else (label if len(header) == 2 else f\"{label} {name}\")\n            \
                     ax.plot(cols[0], ys, style, lw=1, label=tag)\n        \
                 ax.set_xlabel(header[0])\n    \
             ax.set_title(\", \".join(stem for stem, _ in panel))\n    \
             ax.legend(fontsize=\"small\")\n\
         fig.tight_layout()\n\
         fig.savefig(os.path.join(HERE, \"plots.png\"), dpi=120)\n",
    );
    write_atomic(dir, PLOT_SCRIPT, py.as_bytes())
}
