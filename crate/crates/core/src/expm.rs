//! Dense complex matrix exponential.
//!
//! Scaling and squaring with a diagonal Padé approximant of degree 3, 5, 7,
//! 9 or 13, chosen from the 1-norm of the input against the backward-error
//! thresholds of Higham (2005). Degree 13 is used with
//! `s = ceil(log2(‖A‖₁ / θ₁₃))` halvings followed by `s` squarings.

use nalgebra::DMatrix;
use num_complex::Complex64;

const THETA_3: f64 = 1.495_585_217_958_292e-2;
const THETA_5: f64 = 2.539_398_330_063_23e-1;
const THETA_7: f64 = 9.504_178_996_162_932e-1;
const THETA_9: f64 = 2.097_847_961_257_068;
const THETA_13: f64 = 5.371_920_351_148_152;

const PADE_3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE_5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE_7: [f64; 8] = [
    17_297_280.0,
    8_648_640.0,
    1_995_840.0,
    277_200.0,
    25_200.0,
    1_512.0,
    56.0,
    1.0,
];
const PADE_9: [f64; 10] = [
    17_643_225_600.0,
    8_821_612_800.0,
    2_075_673_600.0,
    302_702_400.0,
    30_270_240.0,
    2_162_160.0,
    110_880.0,
    3_960.0,
    90.0,
    1.0,
];
const PADE_13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// Maximum absolute column sum.
pub fn norm_1(a: &DMatrix<Complex64>) -> f64 {
    a.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn scaled(a: &DMatrix<Complex64>, s: f64) -> DMatrix<Complex64> {
    a * Complex64::new(s, 0.0)
}

/// Solves `(V - U) X = V + U` for the Padé approximant `X`.
fn pade_quotient(u: DMatrix<Complex64>, v: DMatrix<Complex64>) -> DMatrix<Complex64> {
    let p = &v + &u;
    let q = v - u;
    q.lu()
        .solve(&p)
        .expect("Padé denominator is nonsingular below the degree threshold")
}

/// Low-degree approximant of order `m ∈ {3, 5, 7, 9}`.
fn pade_low(a: &DMatrix<Complex64>, b: &[f64]) -> DMatrix<Complex64> {
    let n = a.nrows();
    let ident = DMatrix::<Complex64>::identity(n, n);
    let a2 = a * a;
    // even powers A^0, A^2, A^4, ...
    let mut powers = vec![ident.clone(), a2.clone()];
    while powers.len() < b.len() / 2 {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }
    let mut odd = DMatrix::<Complex64>::zeros(n, n);
    let mut even = DMatrix::<Complex64>::zeros(n, n);
    for (j, p) in powers.iter().enumerate() {
        odd += scaled(p, b[2 * j + 1]);
        even += scaled(p, b[2 * j]);
    }
    pade_quotient(a * odd, even)
}

fn pade_13(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let b = &PADE_13;
    let n = a.nrows();
    let ident = DMatrix::<Complex64>::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let inner_u = scaled(&a6, b[13]) + scaled(&a4, b[11]) + scaled(&a2, b[9]);
    let outer_u = &a6 * inner_u
        + scaled(&a6, b[7])
        + scaled(&a4, b[5])
        + scaled(&a2, b[3])
        + scaled(&ident, b[1]);
    let u = a * outer_u;

    let inner_v = scaled(&a6, b[12]) + scaled(&a4, b[10]) + scaled(&a2, b[8]);
    let v = &a6 * inner_v
        + scaled(&a6, b[6])
        + scaled(&a4, b[4])
        + scaled(&a2, b[2])
        + scaled(&ident, b[0]);

    pade_quotient(u, v)
}

/// `exp(A)` for a square complex matrix.
///
/// Panics if `a` is not square or contains non-finite entries.
pub fn expm(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    assert!(a.is_square(), "expm requires a square matrix");
    assert!(
        a.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
        "expm requires finite entries"
    );
    let n = a.nrows();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let norm = norm_1(a);
    if norm == 0.0 {
        return DMatrix::identity(n, n);
    }
    if norm <= THETA_3 {
        return pade_low(a, &PADE_3);
    }
    if norm <= THETA_5 {
        return pade_low(a, &PADE_5);
    }
    if norm <= THETA_7 {
        return pade_low(a, &PADE_7);
    }
    if norm <= THETA_9 {
        return pade_low(a, &PADE_9);
    }

    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let mut result = pade_13(&scaled(a, 2f64.powi(-squarings)));
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}
