use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{ConfigError, RunConfig};
use super::report::{CheckRecord, ConvergenceRow, Num, Report, ScanRow};
use super::Command;
use crate::bargmann::{
    self, apply_annihilation, apply_creation, apply_number, dilation, operator_matrix, q_commutator,
    q_derivative, BargmannPoly, OverflowPolicy,
};
use crate::deformation::Deformation;
use crate::fock::{
    generator_equivalence_check, transformed_ladder, BogoliubovCoefficients, OperatorMatrix,
};
use crate::foliation::{foliation_scan, per_mode_vacuum_overlap};
use crate::weyl::{operating_range_warning, symplectic_invariance_check, WeylSystem, SYMPLECTIC_TOLERANCE};

/// Rounding allowance for exact coefficient identities.
const EXACT_TOLERANCE: f64 = 1e-14;

/// Slack when judging a convergence table: later entries may sit on the
/// rounding floor and wobble by this much without counting as growth.
const CONVERGENCE_FLOOR: f64 = 1e-13;

const QWH_BATTERY: usize = 200;
const WEYL_GRID: usize = 5;
const SYMPLECTIC_BATTERY: usize = 1000;
const RHO_GRID_POINTS: usize = 61;
// beyond ~10^2 the f64 pair (u, v) cannot hold u² - v² = 1 to 1e-12 absolute
const RHO_DECADES: f64 = 2.0;

fn usage_from(e: crate::Error) -> ConfigError {
    ConfigError(e.to_string())
}

/// Uniform point in the closed unit disc.
pub(crate) fn unit_disc<R: Rng>(rng: &mut R) -> Complex64 {
    let r = rng.gen::<f64>().sqrt();
    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(r, theta)
}

fn random_poly<R: Rng>(rng: &mut R, cutoff: usize) -> BargmannPoly {
    let degree = rng.gen_range(0..=cutoff);
    let mut coeffs: Vec<Complex64> = (0..=degree).map(|_| unit_disc(rng)).collect();
    coeffs.resize(cutoff + 1, Complex64::new(0.0, 0.0));
    BargmannPoly::from_coeffs(coeffs)
}

/// Largest ratio between consecutive deviations of a convergence table,
/// with the earlier entry floored at [`CONVERGENCE_FLOOR`]. At most one
/// means the table never grows above the rounding floor.
fn growth_ratio(table: &[ConvergenceRow]) -> f64 {
    table
        .windows(2)
        .map(|w| w[1].deviation.0 / w[0].deviation.0.max(CONVERGENCE_FLOOR))
        .fold(0.0, f64::max)
}

/// Dimensions `start, 2·start, …` up to `min(cap, limit)`, ending on `cap`
/// whenever `cap` is within `limit`.
fn doubling(start: usize, cap: usize, limit: usize) -> Vec<usize> {
    let mut dims: Vec<usize> = std::iter::successors(Some(start.max(1)), |d| Some(d * 2))
        .take_while(|&d| d <= cap.min(limit))
        .collect();
    if dims.last() != Some(&cap) && (cap <= limit || dims.is_empty()) {
        dims.push(cap);
    }
    dims
}

pub fn run(cfg: &RunConfig) -> Result<Report, ConfigError> {
    let started = Instant::now();
    let mut report = match cfg.command {
        Command::VerifyQwh => run_verify_qwh(cfg),
        Command::VerifyWeyl => run_verify_weyl(cfg),
        Command::Bogoliubov => run_bogoliubov(cfg),
        Command::FoliationScan => run_foliation_scan(cfg),
    }?;
    report.timing = Num(started.elapsed().as_secs_f64());
    Ok(report)
}

/// q-commutator against dilation over a seeded polynomial battery, the
/// classical limit of the q-derivative, the interior ccr and the
/// number/generator identities.
pub fn run_verify_qwh(cfg: &RunConfig) -> Result<Report, ConfigError> {
    let d = &cfg.deformation;
    d.ensure_nondegenerate().map_err(usage_from)?;
    let cutoff = cfg.cutoff_degree;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut report = Report::new(cfg);

    let mut worst = 0.0f64;
    let mut worst_ccr = 0.0f64;
    for _ in 0..QWH_BATTERY {
        let p = random_poly(&mut rng, cutoff);
        let scale = p.max_abs().max(f64::MIN_POSITIVE);
        let diff = &q_commutator(&p, d).map_err(usage_from)? - &dilation(&p, d);
        worst = worst.max(diff.max_abs() / scale);

        // [a, a†] on polynomials whose top coefficient is clear
        let interior = p.with_cutoff(cutoff - 1).with_cutoff(cutoff);
        let up_down = apply_annihilation(
            &apply_creation(&interior, OverflowPolicy::Strict).map_err(usage_from)?,
        );
        let down_up = apply_creation(&apply_annihilation(&interior), OverflowPolicy::Strict)
            .map_err(usage_from)?;
        let ccr = &(&up_down - &down_up) - &interior;
        worst_ccr = worst_ccr.max(ccr.max_abs() / interior.max_abs().max(1.0));
    }
    report.check(CheckRecord::new("q_commutator_equals_dilation", worst, cfg.tolerance));
    report.check(CheckRecord::new("ccr_interior", worst_ccr, cfg.tolerance.min(EXACT_TOLERANCE)));

    // classical limit: the error of 𝒟_(1+h) against d/dζ is O(h)
    let probe = BargmannPoly::from_coeffs((0..=cutoff).map(|_| unit_disc(&mut rng)).collect());
    let exact = apply_annihilation(&probe);
    let scale = probe.max_abs().max(f64::MIN_POSITIVE);
    let steps = [1e-2, 1e-4, 1e-6];
    let mut errors = Vec::new();
    for h in steps {
        let dq = Deformation::from_q(Complex64::new(1.0 + h, 0.0)).map_err(usage_from)?;
        let err = (&q_derivative(&probe, &dq).map_err(usage_from)? - &exact).max_abs() / scale;
        // |[k]_q - k| ≤ h·k(k-1)/2·(1+h)^k, maximized at k = D
        let n = cutoff as f64;
        let bound = h * n * (n - 1.0) / 2.0 * (1.0 + h).powf(n);
        report.check(CheckRecord::new(format!("classical_limit_h={h:e}"), err, bound));
        errors.push(err);
    }
    let slopes: Vec<f64> = errors
        .windows(2)
        .zip(steps.windows(2))
        .map(|(e, h)| (e[0] / e[1]).ln() / (h[0] / h[1]).ln())
        .collect();
    let worst_slope = slopes.iter().map(|s| (s - 1.0).abs()).fold(0.0, f64::max);
    report.check(CheckRecord::new("classical_limit_linear_rate", worst_slope, 0.05));

    // ζ d/dζ = (1/2)(c̃² - c̃†²) - 1/2
    let generator = bargmann::squeeze_generator_matrix(cutoff).map_err(usage_from)?;
    let number = operator_matrix(cutoff, |p| Ok(apply_number(p))).map_err(usage_from)?;
    let half = Complex64::new(0.5, 0.0);
    let ident = nalgebra::DMatrix::<Complex64>::identity(cutoff + 1, cutoff + 1);
    let dev = (generator * half - ident * half - number)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    report.check(CheckRecord::new("number_from_generator", dev, cfg.tolerance.min(EXACT_TOLERANCE)));

    let identity = bargmann::number_exponential_identity_check(cutoff, d, cfg.tolerance).map_err(usage_from)?;
    report.check(CheckRecord::new("number_exponential_identity", identity.deviation, identity.tolerance));

    for c in [4usize, 8, 16, 32, 64].into_iter().filter(|&c| c <= cutoff) {
        let r = bargmann::number_exponential_identity_check(c, d, cfg.tolerance).map_err(usage_from)?;
        report.convergence.push(ConvergenceRow {
            dim: c + 1,
            deviation: Num(r.deviation),
        });
    }
    Ok(report)
}

/// Seeded grid of displacements, the Weyl-system relations, the scaled
/// family at `ρ` and `1/ρ`, and exact area invariance.
pub fn run_verify_weyl(cfg: &RunConfig) -> Result<Report, ConfigError> {
    let rho = cfg.real_rho()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut report = Report::new(cfg);

    let grid: Vec<Complex64> = (0..WEYL_GRID).map(|_| unit_disc(&mut rng)).collect();
    let max_composition = |sys: &WeylSystem, rho: Option<f64>| -> Result<f64, ConfigError> {
        let mut worst = 0.0f64;
        for &z1 in &grid {
            for &z2 in &grid {
                let r = match rho {
                    None => sys.composition_check(z1, z2, cfg.tolerance),
                    Some(r) => sys.scaled_composition_check(z1, z2, r, cfg.tolerance).map_err(usage_from)?,
                };
                worst = worst.max(r.deviation);
            }
        }
        Ok(worst)
    };

    let sys = WeylSystem::new(cfg.dim).map_err(usage_from)?;
    // one warning for the widest label actually used
    let widest = grid
        .iter()
        .flat_map(|&z1| grid.iter().map(move |&z2| z1 + z2))
        .flat_map(|s| [1.0, rho, 1.0 / rho].map(|r| Complex64::new(r * s.re, s.im / r)))
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .expect("non-empty grid");
    if let Some(w) = operating_range_warning(cfg.dim, widest) {
        report.warn(w);
    }
    report.check(CheckRecord::new("composition", max_composition(&sys, None)?, cfg.tolerance));

    let alpha = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let beta = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let [uu, vv, uv] = sys.weyl_relations_deviation(alpha, beta);
    report.check(CheckRecord::new("u_group_law", uu, cfg.tolerance));
    report.check(CheckRecord::new("v_group_law", vv, cfg.tolerance));
    report.check(CheckRecord::new("uv_commutation_phase", uv, cfg.tolerance));

    for r in [rho, 1.0 / rho] {
        let dev = max_composition(&sys, Some(r))?;
        report.check(CheckRecord::new(format!("scaled_composition_rho={r}"), dev, cfg.tolerance));
    }

    let mut worst_area = 0.0f64;
    for _ in 0..SYMPLECTIC_BATTERY {
        let z1 = unit_disc(&mut rng) * 2.0;
        let z2 = unit_disc(&mut rng) * 2.0;
        let r_k = 10f64.powf(rng.gen_range(-1.0..1.0));
        let r = symplectic_invariance_check(z1, z2, r_k).map_err(usage_from)?;
        worst_area = worst_area.max(r.relative_deviation);
    }
    report.check(CheckRecord::new("symplectic_area_invariance", worst_area, SYMPLECTIC_TOLERANCE));

    for dim in doubling(32, cfg.dim, 256) {
        let dev = if dim == cfg.dim {
            report.checks[0].deviation.0
        } else {
            max_composition(&WeylSystem::new(dim).map_err(usage_from)?, None)?
        };
        report.convergence.push(ConvergenceRow { dim, deviation: Num(dev) });
    }
    if cfg.dim < 32 {
        report.warn(format!("dimension {} is below the convergence floor of 32", cfg.dim));
    }
    report.check(CheckRecord::new("composition_nonincreasing", growth_ratio(&report.convergence), 1.0));
    Ok(report)
}

/// Squeeze conjugation against the closed-form Bogoliubov pair, with
/// coefficient checks over a logarithmic ρ grid.
pub fn run_bogoliubov(cfg: &RunConfig) -> Result<Report, ConfigError> {
    let eps = cfg.real_epsilon()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut report = Report::new(cfg);
    let block = (cfg.dim / 4).max(1);

    let r = generator_equivalence_check(cfg.dim, eps, block, cfg.tolerance).map_err(usage_from)?;
    report.check(CheckRecord::new("generator_equivalence", r.deviation, cfg.tolerance));

    // log grid over [1e-2, 1e2] plus seeded extras; ρ = 1 sits on the grid
    let mut rhos: Vec<f64> = (0..RHO_GRID_POINTS)
        .map(|i| 10f64.powf(-RHO_DECADES + 2.0 * RHO_DECADES * i as f64 / (RHO_GRID_POINTS - 1) as f64))
        .collect();
    rhos.extend((0..8).map(|_| 10f64.powf(rng.gen_range(-RHO_DECADES..RHO_DECADES))));
    let mut worst_form = 0.0f64;
    let mut worst_hyperbolic = 0.0f64;
    for &rho in &rhos {
        let k = BogoliubovCoefficients::from_rho(rho).map_err(usage_from)?;
        worst_form = worst_form.max((k.symplectic_form() - 1.0).abs());
        let e = k.epsilon.expect("positive rho");
        let scale = e.cosh();
        worst_hyperbolic = worst_hyperbolic
            .max((k.u - e.cosh()).abs() / scale)
            .max((k.v + e.sinh()).abs() / scale);
    }
    let unit = BogoliubovCoefficients::from_rho(1.0).map_err(usage_from)?;
    report.check(CheckRecord::new("u_minus_v_squared", worst_form, 1e-12));
    report.check(CheckRecord::new("u_v_hyperbolic", worst_hyperbolic, 1e-12));
    report.check(CheckRecord::new("identity_at_rho_one", (unit.u - 1.0).abs().max(unit.v.abs()), 0.0));

    // ccr preserved by the transformation on the leading block
    let (c_rho, cd_rho, _) = transformed_ladder(cfg.dim, (-eps).exp()).map_err(usage_from)?;
    let ident = OperatorMatrix::identity(cfg.dim).map_err(usage_from)?;
    let ccr = c_rho.commutator(&cd_rho).block_deviation(&ident, cfg.dim - 1);
    report.check(CheckRecord::new("transformed_ccr", ccr, 1e-10));

    for dim in doubling(2 * block, cfg.dim, 256) {
        let b = block.min(dim / 2);
        let r = generator_equivalence_check(dim, eps, b, cfg.tolerance).map_err(usage_from)?;
        report.convergence.push(ConvergenceRow { dim, deviation: Num(r.deviation) });
    }
    report.check(CheckRecord::new("equivalence_nonincreasing", growth_ratio(&report.convergence), 1.0));
    Ok(report)
}

/// Overlap products per mode count, in the requested order, with the
/// per-mode value's convergence in the truncation.
pub fn run_foliation_scan(cfg: &RunConfig) -> Result<Report, ConfigError> {
    let eps = cfg.real_epsilon()?;
    let mut report = Report::new(cfg);
    let scan = foliation_scan(eps, &cfg.mode_counts, cfg.dim).map_err(usage_from)?;
    for (m, overlap) in scan.rows() {
        report.scan.push(ScanRow { modes: m, overlap: Num(overlap) });
    }

    let factorization = scan
        .rows()
        .map(|(m, product)| {
            let expected = (m as f64 * scan.per_mode_overlap.ln()).exp();
            if expected == 0.0 {
                product.abs()
            } else {
                (product / expected - 1.0).abs()
            }
        })
        .fold(0.0, f64::max);
    report.check(CheckRecord::new("factorization", factorization, cfg.tolerance));

    let mut sorted: Vec<(usize, f64)> = scan.rows().collect();
    sorted.sort_by_key(|&(m, _)| m);
    sorted.dedup_by_key(|&mut (m, _)| m);
    let monotone = if eps == 0.0 {
        sorted.iter().all(|&(_, p)| p == 1.0)
    } else {
        sorted.windows(2).all(|w| w[1].1 < w[0].1)
    };
    report.check(CheckRecord::new(
        "monotone_decay",
        if monotone { 0.0 } else { 1.0 },
        0.0,
    ));

    let refined = per_mode_vacuum_overlap(eps, cfg.dim * 2).map_err(usage_from)?;
    report.check(CheckRecord::new(
        "per_mode_converged",
        (refined - scan.per_mode_overlap).abs(),
        cfg.tolerance,
    ));
    for dim in doubling(16, cfg.dim, 512) {
        let v = per_mode_vacuum_overlap(eps, dim).map_err(usage_from)?;
        report.convergence.push(ConvergenceRow {
            dim,
            deviation: Num((v - refined).abs()),
        });
    }
    Ok(report)
}
