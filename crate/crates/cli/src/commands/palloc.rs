//! `palloc`: power allocation over parallel scalar fading subchannels.

use fadecap_core::designs::{palloc_numeric, palloc_rayleigh_highsnr, palloc_ricean_highsnr, Fading, SubchannelSpec};
use fadecap_core::mc::CommonDraws;
use fadecap_core::{Constellation, McConfig};

use crate::config::PallocConfig;
use crate::error::{CliError, ConfigContext, Result};
use crate::output::{bits, int, num, Output};

pub const HEADER: &[&str] = &[
    "snr_db",
    "design",
    "subchannel",
    "power",
    "mi_nats",
    "mi_stderr_nats",
    "mi_bits",
    "mi_stderr_bits",
    "low_confidence",
];

/// Σ_k Ī_k(snr·p_k) on frozen draws, with per-subchannel (mean, s.e.).
fn evaluate(draws: &[CommonDraws], csts: &[Constellation], snr: f64, p: &[f64]) -> Result<Vec<(f64, f64)>> {
    draws
        .iter()
        .zip(csts)
        .zip(p)
        .map(|((d, c), &pk)| {
            if pk <= 0.0 {
                return Ok((0.0, 0.0));
            }
            let s = d.average(snr * pk, c)?;
            Ok((s.log_m - s.mi_gap.mean, s.mi_gap.std_error))
        })
        .collect()
}

pub fn run(cfg: &PallocConfig, seed: u64) -> Result<Output> {
    if cfg.subchannel.is_empty() {
        return Err(CliError::config("subchannel", "at least one subchannel is required"));
    }
    let ricean = cfg.subchannel[0].mean.is_some();
    let mut subs = Vec::with_capacity(cfg.subchannel.len());
    for (k, s) in cfg.subchannel.iter().enumerate() {
        let field = format!("subchannel[{k}]");
        if s.mean.is_some() != ricean {
            return Err(CliError::config(format!("{field}.mean"), "subchannels must be all Rayleigh or all Ricean"));
        }
        let cst = crate::config::ConstellationSpec { family: s.family, points: None }.build(1, &field)?;
        let fading = match s.mean {
            Some(mu) => Fading::Ricean { mu: mu.value(), sigma2: s.sigma2 },
            None => Fading::Rayleigh { sigma2: s.sigma2 },
        };
        subs.push(SubchannelSpec::new(cst, fading).field(&field)?);
    }
    let high = if ricean {
        palloc_ricean_highsnr(&subs, cfg.budget)
    } else {
        palloc_rayleigh_highsnr(&subs, cfg.budget)
    }
    .field("budget")?;
    let grid = cfg.grid.build()?;
    let mc = cfg.mc.build(seed)?;

    // Evaluation draws are independent of the ones the numeric search optimizes on.
    let draws = subs
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let sub_cfg = McConfig { seed: seed.wrapping_add(1 + k as u64), ..mc };
            CommonDraws::scalar(s.fading.mean(), s.fading.sigma2(), &sub_cfg)
        })
        .collect::<fadecap_core::Result<Vec<_>>>()?;
    let csts: Vec<Constellation> = subs.iter().map(|s| s.constellation.clone()).collect();

    let mut out = Output::new(HEADER);
    out.meta("fading", if ricean { "ricean" } else { "rayleigh" });
    out.meta("budget", num(cfg.budget));
    out.report.push(format!(
        "high-snr allocation: [{}]",
        high.p.iter().map(|&p| num(p)).collect::<Vec<_>>().join(", ")
    ));
    for (&snr, db) in grid.points().iter().zip(grid.db()) {
        let mut designs = vec![("highsnr", high.p.clone(), false)];
        if cfg.numeric {
            let n = palloc_numeric(&subs, cfg.budget, snr, &mc)?;
            out.report.push(format!(
                "{} dB numeric allocation: [{}]{}",
                num(db),
                n.allocation.p.iter().map(|&p| num(p)).collect::<Vec<_>>().join(", "),
                if n.low_confidence { " (low confidence)" } else { "" }
            ));
            out.flagged |= n.low_confidence;
            designs.push(("numeric", n.allocation.p, n.low_confidence));
        }
        for (name, p, low) in designs {
            let per = evaluate(&draws, &csts, snr, &p)?;
            let mut total = (0.0, 0.0);
            for (k, &(mean, se)) in per.iter().enumerate() {
                total.0 += mean;
                total.1 += se * se;
                out.push(vec![num(db), name.into(), int(k), num(p[k]), num(mean), num(se), bits(mean), bits(se), low.to_string()]);
            }
            let se = total.1.sqrt();
            out.push(vec![
                num(db),
                name.into(),
                "total".into(),
                num(cfg.budget),
                num(total.0),
                num(se),
                bits(total.0),
                bits(se),
                low.to_string(),
            ]);
            out.report.push(format!("{} dB {name}: Σ Ī = {} bits", num(db), bits(total.0)));
        }
    }
    Ok(out)
}

