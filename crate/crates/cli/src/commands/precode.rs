//! `precode`: high-snr linear precoder for Rayleigh channels.

use fadecap_core::designs::{
    certify_by_probes, precoder_canonical, precoder_correlated, precoder_objective, PrecoderRoute,
};
use fadecap_core::mc::avg_quantities;
use fadecap_core::{ChannelVariant, Complex64, ComplexMatrix, ComplexVector, Constellation};

use crate::config::PrecodeConfig;
use crate::error::{CliError, Result};
use crate::output::{bits, blank, num, Output};

pub const HEADER: &[&str] =
    &["design", "route", "objective", "snr_db", "mi_nats", "mi_stderr_nats", "mi_bits", "mi_stderr_bits"];

pub const DEFAULT_PROBES: usize = 200;

fn precoded(c: &Constellation, p: &ComplexMatrix) -> fadecap_core::Result<Constellation> {
    let points = c
        .points()
        .iter()
        .map(|x| (p * ComplexVector::from_column_slice(x)).iter().copied().collect())
        .collect();
    Constellation::from_points(c.n_t(), points)
}

fn format_matrix(m: &ComplexMatrix) -> String {
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let clean = |x: f64| if x.abs() <= 1e-14 * scale { 0.0 } else { x };
    let cell = |z: &Complex64| {
        let (re, im) = (clean(z.re), clean(z.im));
        format!("{}{}{}i", num(re), if im < 0.0 { "-" } else { "+" }, num(im.abs()))
    };
    let rows: Vec<String> = m.row_iter().map(|r| r.iter().map(cell).collect::<Vec<_>>().join(" ")).collect();
    format!("[{}]", rows.join("; "))
}

pub fn run(cfg: &PrecodeConfig, seed: u64) -> Result<Output> {
    let model = cfg.model.build()?;
    let n_t = model.n_t();
    let n_r = model.n_r();
    let cst = cfg.constellation.build(n_t, "constellation")?;
    let budget = cfg.budget.unwrap_or(n_t as f64);
    if budget.is_nan() || budget <= 0.0 || budget.is_infinite() {
        return Err(CliError::config("budget", "must be positive"));
    }
    let probes = cfg.probes.unwrap_or(DEFAULT_PROBES);
    let mc = cfg.mc_pair()?.map(|(g, m)| Ok::<_, CliError>((g.build()?, m.build(seed)?))).transpose()?;

    let (report, theta_t) = match model.variant() {
        ChannelVariant::CanonicalRayleigh { .. } => (precoder_canonical(&cst, n_r, budget)?, None),
        ChannelVariant::CorrelatedRayleigh { theta_t, theta_r } => {
            (precoder_correlated(&cst, theta_t, theta_r, n_r, budget)?, Some(theta_t.clone()))
        }
        ChannelVariant::Ricean { .. } => {
            return Err(CliError::config("model.kind", "precoding supports rayleigh and correlated models"))
        }
    };
    let cert = certify_by_probes(&cst, theta_t.as_ref(), n_r, budget, report.objective, probes, seed, 1e-9 * report.objective.abs())?;

    let uniform = ComplexMatrix::identity(n_t, n_t).scale((budget / n_t as f64).sqrt());
    let uniform_obj = precoder_objective(&cst, theta_t.as_ref(), n_r, &(uniform.adjoint() * &uniform))?;
    let route = match report.route {
        PrecoderRoute::Canonical => "canonical",
        PrecoderRoute::Numeric => "numeric",
    };

    let mut out = Output::new(HEADER);
    out.meta("budget", num(budget));
    out.meta("precoder", format_matrix(&report.precoder.matrix));
    out.meta("stationarity", num(report.stationarity));
    out.meta("iterations", report.iterations.to_string());
    out.meta("probes_worse", format!("{}/{}", cert.worse, cert.probes));
    out.report.push(format!("route {route}, objective {}, {} iterations", num(report.objective), report.iterations));
    out.report.push(format!("precoder {}", format_matrix(&report.precoder.matrix)));
    out.report.push(format!("{} of {} random feasible probes are no better (best probe {})", cert.worse, cert.probes, num(cert.best_probe)));
    out.flagged = cert.worse < cert.probes;

    let designs = [("uniform", "fixed", &uniform, uniform_obj), ("optimized", route, &report.precoder.matrix, report.objective)];
    for (name, r, p, obj) in designs {
        match &mc {
            None => out.push(vec![name.into(), r.into(), num(obj), blank(), blank(), blank(), blank(), blank()]),
            Some((grid, mcfg)) => {
                let samples = avg_quantities(grid, &model, &precoded(&cst, p)?, mcfg)?;
                for (s, db) in samples.iter().zip(grid.db()) {
                    let (mean, se) = (s.log_m - s.mi_gap.mean, s.mi_gap.std_error);
                    out.push(vec![name.into(), r.into(), num(obj), num(db), num(mean), num(se), bits(mean), bits(se)]);
                }
            }
        }
    }
    Ok(out)
}
