//! CSV tables and gnuplot scripts reproducing the reference study.
//!
//! For `k` noise levels the output is `fig1` (unregularized estimates for
//! every δ), `fig2 … fig{k+1}` (regularized estimates at one δ each, for μ
//! from the rule with p = 1, 2 and μ = 1, 3) and `fig{k+2}` (mean relative
//! error against μ). The default three noise levels give `fig1 … fig5`.
//! Each `figN.csv` has a companion `figN.gp`; run `gnuplot figN.gp` in the
//! output directory to render `figN.png`.

use std::fs;
use std::path::{Path, PathBuf};

use super::{run_mu_sweep, summarize, MuGrid, Problem, SweepConfig};
use crate::csvio::Table;
use crate::error::{Error, Result};
use crate::inversion::{estimate_source_regularized, estimate_source_unregularized, select_mu};
use crate::noise::add_noise;

/// Points in the default μ grid on `[0, 40]`.
pub const FIGURE_MU_COUNT: usize = 81;

fn fmt_label(v: f64) -> String {
    let s = format!("{v:.5}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

fn line_plot(csv: &str, title: &str, ylabel: &str, columns: usize) -> String {
    format!(
        "# render with: gnuplot {stem}.gp\n\
         set datafile separator ','\n\
         set key autotitle columnhead outside\n\
         set terminal pngcairo size 1000,600\n\
         set output '{stem}.png'\n\
         set title '{title}'\n\
         set xlabel 'x'\n\
         set ylabel '{ylabel}'\n\
         plot for [c=2:{columns}] '{csv}' using 1:c with lines lw 2\n",
        stem = csv.trim_end_matches(".csv"),
    )
}

fn curve_plot(csv: &str, deltas: &[f64]) -> String {
    let list: Vec<String> = deltas.iter().map(|d| d.to_string()).collect();
    format!(
        "# render with: gnuplot {stem}.gp\n\
         set datafile separator ','\n\
         set terminal pngcairo size 1000,600\n\
         set output '{stem}.png'\n\
         set title 'Mean relative error against mu'\n\
         set xlabel 'mu'\n\
         set ylabel 'relative L2 error'\n\
         set logscale y\n\
         plot for [d in \"{list}\"] '{csv}' skip 1 using 1:(($2 == real(d)) ? $3 : NaN) with linespoints title 'delta = '.d\n",
        stem = csv.trim_end_matches(".csv"),
        list = list.join(" "),
    )
}

/// Writes every figure table and plot script into `out_dir` (created if
/// absent) and returns the paths written, CSVs first.
pub fn reproduce_figures(out_dir: &Path, config: &SweepConfig) -> Result<Vec<PathBuf>> {
    config.validate()?;
    if !matches!(config.mus, MuGrid::Values(_)) {
        return Err(Error::validation("figures need explicit mu values"));
    }
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let problem = Problem::new(config)?;
    let x: Vec<f64> = config.grid.points().collect();
    let k = config.deltas.len();

    let mut csvs: Vec<(String, Table, String)> = Vec::new();

    let mut fig1 = Table::new();
    fig1.push("x", x.clone());
    fig1.push("f_true", problem.truth.values().to_vec());
    let noisy: Vec<_> = (0..k)
        .map(|i| add_noise(&problem.data, &config.noise(i, 0)))
        .collect();
    for (i, g) in noisy.iter().enumerate() {
        let est = estimate_source_unregularized(g)?;
        fig1.push(
            format!("unregularized_delta_{}", config.deltas[i]),
            est.into_values(),
        );
    }
    let script = line_plot(
        "fig1.csv",
        "Unregularized estimates",
        "f",
        fig1.headers.len(),
    );
    csvs.push(("fig1.csv".into(), fig1, script));

    for (i, g) in noisy.iter().enumerate() {
        let delta = config.deltas[i];
        let mut mus = Vec::new();
        for p in [1.0, 2.0] {
            let mu = select_mu(delta, 1.0, p)?.mu;
            mus.push((format!("mu_{}_rule_p{}", fmt_label(mu), p), mu));
        }
        mus.push(("mu_1".into(), 1.0));
        mus.push(("mu_3".into(), 3.0));
        let mut fig = Table::new();
        fig.push("x", x.clone());
        fig.push("f_true", problem.truth.values().to_vec());
        for (label, mu) in mus {
            fig.push(label, estimate_source_regularized(g, mu)?.into_values());
        }
        let name = format!("fig{}.csv", i + 2);
        let script = line_plot(
            &name,
            &format!("Regularized estimates, delta = {delta}"),
            "f",
            fig.headers.len(),
        );
        csvs.push((name, fig, script));
    }

    let curve = summarize(&run_mu_sweep(config)?);
    let mut fig5 = Table::new();
    fig5.push("mu", curve.iter().map(|c| c.mu).collect());
    fig5.push("delta", curve.iter().map(|c| c.delta).collect());
    fig5.push(
        "mean_rel_error",
        curve.iter().map(|c| c.mean_rel_error).collect(),
    );
    fig5.push(
        "stderr_rel_error",
        curve.iter().map(|c| c.stderr_rel_error).collect(),
    );
    let name = format!("fig{}.csv", k + 2);
    let script = curve_plot(&name, &config.deltas);
    csvs.push((name, fig5, script));

    let mut written = Vec::new();
    let mut scripts = Vec::new();
    for (name, table, script) in csvs {
        let path = out_dir.join(&name);
        table.write(&path)?;
        written.push(path);
        let gp = out_dir.join(name.replace(".csv", ".gp"));
        fs::write(&gp, script).map_err(|e| Error::io(&gp, e))?;
        scripts.push(gp);
    }
    written.extend(scripts);
    Ok(written)
}
