//! `curve`: Monte Carlo truth, averaged bounds and high-snr expansions on a grid.

use fadecap_core::asymptotics::distance_dist_for_model;
use fadecap_core::bounds::avg_bounds_grid;
use fadecap_core::mc::avg_quantities;
use fadecap_core::{epsilon_bounds, evaluate_expansion, Quantity};

use super::REPORT_SIGMAS;
use crate::config::CurveConfig;
use crate::error::Result;
use crate::output::{bits, blank, num, Output};

pub const HEADER: &[&str] = &[
    "snr_db",
    "mc_mean",
    "mc_stderr",
    "bound_lb",
    "bound_ub",
    "expansion_lb",
    "expansion_ub",
    "mc_mean_bits",
    "mc_stderr_bits",
    "bound_lb_bits",
    "bound_ub_bits",
    "expansion_lb_bits",
    "expansion_ub_bits",
];

pub fn run(cfg: &CurveConfig, seed: u64) -> Result<Output> {
    let model = cfg.model.build()?;
    let cst = cfg.constellation.build(model.n_t(), "constellation")?;
    let grid = cfg.grid.build()?;
    let mc = cfg.mc.build(seed)?;
    let kind = Quantity::from(cfg.kind);

    let oracle = avg_quantities(&grid, &model, &cst, &mc)?;
    let bounds = avg_bounds_grid(&grid, &model, &cst, &mc)?;
    let eb = epsilon_bounds(&distance_dist_for_model(&cst, &model)?, cst.m())?;
    let expansion = evaluate_expansion(&eb, &grid);
    let expansion = match kind {
        Quantity::Mi => &expansion.mi,
        Quantity::Mmse => &expansion.mmse,
        Quantity::Pe => &expansion.pe,
    };

    let mut out = Output::new(HEADER);
    out.meta("kind", kind.name());
    out.meta("units", if kind == Quantity::Mi { "nats; *_bits columns in bits" } else { "bits columns unused" });
    out.meta("diversity_order", eb.d.to_string());
    let mut outside = 0;
    for (k, db) in grid.db().into_iter().enumerate() {
        let est = oracle[k].get(kind);
        let b = bounds[k].get(kind);
        let e = expansion[k];
        let vals = [est.mean, est.std_error, b.lower.mean, b.upper.mean, e.lower, e.upper];
        let mut row = vec![num(db)];
        row.extend(vals.iter().map(|&v| num(v)));
        if kind == Quantity::Mi {
            row.extend(vals.iter().map(|&v| bits(v)));
        } else {
            row.extend((0..vals.len()).map(|_| blank()));
        }
        out.push(row);

        let lo_se = (est.std_error.powi(2) + b.lower.std_error.powi(2)).sqrt();
        let hi_se = (est.std_error.powi(2) + b.upper.std_error.powi(2)).sqrt();
        if est.mean < b.lower.mean - REPORT_SIGMAS * lo_se || est.mean > b.upper.mean + REPORT_SIGMAS * hi_se {
            outside += 1;
            out.report.push(format!("{db} dB: estimate {} outside [{}, {}]", num(est.mean), num(b.lower.mean), num(b.upper.mean)));
        }
    }
    out.report.insert(
        0,
        format!("{} rows, d = {}, {} outside the averaged bounds at {REPORT_SIGMAS} s.e.", grid.len(), eb.d, outside),
    );
    out.flagged = outside > 0;
    Ok(out)
}
