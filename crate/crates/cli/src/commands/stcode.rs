//! `stcode`: ranks space-time codebooks by the high-snr criteria.

use std::cmp::Ordering;

use fadecap_core::designs::stcode::compare_criteria;
use fadecap_core::designs::st_criteria;
use fadecap_core::mc::avg_quantities_code;
use fadecap_core::ChannelModel;

use crate::config::StcodeConfig;
use crate::error::{CliError, ConfigContext, Result};
use crate::output::{bits, blank, int, num, Output};

pub const HEADER: &[&str] = &[
    "code",
    "rank",
    "r_min",
    "criterion",
    "d",
    "certified",
    "snr_db",
    "mi_nats",
    "mi_stderr_nats",
    "mi_bits",
    "mi_stderr_bits",
];

pub fn run(cfg: &StcodeConfig, seed: Option<u64>) -> Result<Output> {
    if cfg.code.is_empty() {
        return Err(CliError::config("code", "at least one code is required"));
    }
    let codes = cfg.code.iter().enumerate().map(|(i, c)| c.build(i)).collect::<Result<Vec<_>>>()?;
    let (n_t, t, m) = (codes[0].n_t(), codes[0].t(), codes[0].m());
    if let Some(i) = codes.iter().position(|c| (c.n_t(), c.t(), c.m()) != (n_t, t, m)) {
        return Err(CliError::config(format!("code[{i}]"), format!("all codes must share the shape ({n_t}, {t}, {m})")));
    }
    let crit = codes.iter().map(|c| st_criteria(c, cfg.n_r)).collect::<fadecap_core::Result<Vec<_>>>().field("n_r")?;
    let ranks: Vec<usize> = crit
        .iter()
        .map(|a| 1 + crit.iter().filter(|b| compare_criteria(b, a) == Ordering::Greater).count())
        .collect();
    let mc = match cfg.mc_pair()? {
        None => None,
        Some((g, m)) => {
            let seed = crate::config::seed_for(seed, "stcode with a grid")?;
            Some((g.build()?, m.build(seed)?, ChannelModel::canonical_rayleigh(n_t, cfg.n_r).field("n_r")?))
        }
    };

    let mut order: Vec<usize> = (0..codes.len()).collect();
    order.sort_by_key(|&i| ranks[i]);
    let mut ordering = cfg.code[order[0]].name.clone();
    for w in order.windows(2) {
        let sep = if ranks[w[0]] == ranks[w[1]] { " = " } else { " > " };
        ordering.push_str(sep);
        ordering.push_str(&cfg.code[w[1]].name);
    }

    let mut out = Output::new(HEADER);
    out.meta("ordering", ordering.clone());
    out.meta("n_r", cfg.n_r.to_string());
    out.report.push(format!("ordering: {ordering}"));
    for (i, (spec, c)) in cfg.code.iter().zip(&crit).enumerate() {
        out.report.push(format!(
            "{}: r_min = {}, criterion = {}, d = {}{}",
            spec.name,
            c.r_min,
            num(c.criterion),
            c.d,
            if c.certified { "" } else { " (uncertified)" }
        ));
        let head = vec![spec.name.clone(), int(ranks[i]), int(c.r_min), num(c.criterion), int(c.d), c.certified.to_string()];
        match &mc {
            None => {
                let mut row = head;
                row.extend((0..5).map(|_| blank()));
                out.push(row);
            }
            Some((grid, mcfg, model)) => {
                let samples = avg_quantities_code(grid, model, &codes[i], mcfg)?;
                for (s, db) in samples.iter().zip(grid.db()) {
                    let (mean, se) = (s.log_m - s.mi_gap.mean, s.mi_gap.std_error);
                    let mut row = head.clone();
                    row.extend([num(db), num(mean), num(se), bits(mean), bits(se)]);
                    out.push(row);
                }
            }
        }
    }
    Ok(out)
}
