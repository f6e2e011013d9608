//! Closed-form bound evaluators — the degree/girth Moore bound, the
//! edge and face-number bounds, the recursive exponent table, and the
//! multiplicity inequality — compared against measured face numbers.
//!
//! Exponent arithmetic is exact over the rationals. Bound values are
//! reported in double precision; pass flags are decided exactly whenever
//! every factor evaluates to a rational (integer bases whose roots come
//! out clean), and otherwise with a 1e-9 relative guard band.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::girth::{girth_all, graph_girth, GirthValue, SearchParams};

/// One evaluated bound next to a measured quantity.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub bound_name: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub bound_value: f64,
    pub measured_value: f64,
    pub pass: bool,
    pub notes: String,
}

/// CSV export with the plot-ready column set.
pub fn bound_reports_csv(reports: &[BoundReport]) -> String {
    let mut out = String::from("n,d,r,p,i,bound,measured,pass\n");
    for rep in reports {
        let get = |k: &str| {
            rep.parameters
                .get(k)
                .map(|v| v.to_string())
                .unwrap_or_default()
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            get("n"),
            get("d"),
            get("r"),
            get("p"),
            get("i"),
            rep.bound_value,
            rep.measured_value,
            rep.pass
        ));
    }
    out
}

/// Minimum vertex count of a graph with average degree `a` and girth at
/// least `g`: `2 Σ (a-1)^i` over `i < r` for `g = 2r`, and
/// `1 + a Σ (a-1)^i` for `g = 2r + 1`.
pub fn moore_bound(a: f64, g: u32) -> Result<f64> {
    let exact = moore_bound_exact(
        &BigRational::from_f64(a).ok_or_else(|| Error::domain("degree must be finite"))?,
        g,
    )?;
    Ok(exact.to_f64().expect("moore bound fits in f64"))
}

/// The same bound in exact rational arithmetic.
pub fn moore_bound_exact(a: &BigRational, g: u32) -> Result<BigRational> {
    if g < 3 {
        return Err(Error::domain("girth must be at least 3"));
    }
    if *a < BigRational::from_integer(2.into()) {
        return Err(Error::domain("average degree must be at least 2"));
    }
    let am1 = a - BigRational::one();
    let r = g / 2;
    let mut sum = BigRational::zero();
    let mut pow = BigRational::one();
    for _ in 0..r {
        sum += &pow;
        pow *= &am1;
    }
    Ok(if g.is_multiple_of(2) {
        BigRational::from_integer(2.into()) * sum
    } else {
        BigRational::one() + a * sum
    })
}

/// Checks a graph against the Moore bound with its measured average
/// degree and girth, exactly over the rationals.
pub fn moore_check(g: &SimplicialComplex) -> Result<BoundReport> {
    if g.dim() > 1 {
        return Err(Error::domain("the Moore bound applies to graphs"));
    }
    let n = g.vertex_count();
    let mut parameters = BTreeMap::new();
    parameters.insert("n".into(), serde_json::json!(n));
    let girth = graph_girth(g)?;
    let a = if n > 0 {
        BigRational::new(BigInt::from(2 * g.f(1)), BigInt::from(n))
    } else {
        BigRational::zero()
    };
    parameters.insert(
        "avg_degree".into(),
        serde_json::json!(a.to_f64().unwrap_or(f64::NAN)),
    );
    match girth {
        GirthValue::Infinite => Ok(BoundReport {
            bound_name: "moore".into(),
            parameters,
            bound_value: 0.0,
            measured_value: n as f64,
            pass: true,
            notes: "acyclic graph; bound holds vacuously".into(),
        }),
        GirthValue::Finite(gv) => {
            parameters.insert("girth".into(), serde_json::json!(gv));
            if a < BigRational::from_integer(2.into()) {
                return Ok(BoundReport {
                    bound_name: "moore".into(),
                    parameters,
                    bound_value: 0.0,
                    measured_value: n as f64,
                    pass: true,
                    notes: "average degree below 2; bound not applicable".into(),
                });
            }
            let bound = moore_bound_exact(&a, gv)?;
            let pass = BigRational::from_integer(BigInt::from(n)) >= bound;
            Ok(BoundReport {
                bound_name: "moore".into(),
                parameters,
                bound_value: bound.to_f64().unwrap_or(f64::NAN),
                measured_value: n as f64,
                pass,
                notes: format!("n >= n_0(a, {gv}) with exact rational a"),
            })
        }
    }
}

/// The recursive exponents: `a_{2,r,i} = (r^i - 1)/(r^i - r^{i-1})`,
/// `a_{p,r,p-1} = p - 1`, and
/// `a_{p,r,i} = a_{p-1,r,i-1}/2 + a_{p,r,i-1}/2 + 1` for `p >= 3, i >= p`.
pub fn a_exponent(p: u32, r: u32, i: u32) -> Result<BigRational> {
    if p < 2 || r < 2 || i + 1 < p {
        return Err(Error::domain(format!(
            "a_exponent needs p >= 2, r >= 2, i >= p - 1; got ({p},{r},{i})"
        )));
    }
    let mut memo = BTreeMap::new();
    Ok(a_exp_memo(p, r, i, &mut memo))
}

fn a_exp_memo(p: u32, r: u32, i: u32, memo: &mut BTreeMap<(u32, u32), BigRational>) -> BigRational {
    if let Some(v) = memo.get(&(p, i)) {
        return v.clone();
    }
    let value = if p == 2 {
        let ri = BigInt::from(r).pow(i);
        let rim1 = BigInt::from(r).pow(i - 1);
        BigRational::new(&ri - BigInt::one(), ri - rim1)
    } else if i == p - 1 {
        BigRational::from_integer((p - 1).into())
    } else {
        let half = BigRational::new(BigInt::one(), 2.into());
        &half * a_exp_memo(p - 1, r, i - 1, memo)
            + &half * a_exp_memo(p, r, i - 1, memo)
            + BigRational::one()
    };
    memo.insert((p, i), value.clone());
    value
}

/// The exact exponent table over a parameter box.
#[derive(Clone, Debug)]
pub struct ExponentTable {
    entries: BTreeMap<(u32, u32, u32), BigRational>,
}

impl ExponentTable {
    pub fn build(p_max: u32, r_max: u32, i_max: u32) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for p in 2..=p_max {
            for r in 2..=r_max {
                for i in (p - 1)..=i_max {
                    entries.insert((p, r, i), a_exponent(p, r, i)?);
                }
            }
        }
        Ok(ExponentTable { entries })
    }

    pub fn get(&self, p: u32, r: u32, i: u32) -> Option<&BigRational> {
        self.entries.get(&(p, r, i))
    }

    /// The limit `2p - 3 + 1/(r-1)` the exponents increase towards.
    pub fn limit(p: u32, r: u32) -> BigRational {
        BigRational::from_integer((2 * p - 3).into())
            + BigRational::new(BigInt::one(), (r - 1).into())
    }
}

/// Parity of the girth hypothesis for the edge bound.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GirthParity {
    /// `gr_1 > 2r`
    Even,
    /// `gr_1 > 2r + 1`
    Odd,
}

/// The edge bound `(1/2 + eps) (d-1)^{1-1/r} n^{1+1/r}`, with the odd
/// variant coefficient `2^{-1-1/r} + eps`.
pub fn f1_bound(n: f64, d: f64, r: u32, eps: f64, parity: GirthParity) -> f64 {
    let r = r as f64;
    let coeff = match parity {
        GirthParity::Even => 0.5 + eps,
        GirthParity::Odd => (2.0f64).powf(-1.0 - 1.0 / r) + eps,
    };
    coeff * (d - 1.0).powf(1.0 - 1.0 / r) * n.powf(1.0 + 1.0 / r)
}

/// The sharpened `d = 3, r = 3` edge bound `(1/2 + eps) 3^{1/3} n^{4/3}`.
pub fn f1_bound_d3_r3(n: f64, eps: f64) -> f64 {
    (0.5 + eps) * 3.0f64.powf(1.0 / 3.0) * n.powf(4.0 / 3.0)
}

/// The reported girth-hypothesis ratio `r / log(n/d)`; the bound's small-
/// ness condition is reported alongside results, never adjudicated.
pub fn girth_hypothesis_ratio(n: f64, d: f64, r: u32) -> f64 {
    r as f64 / (n / d).ln()
}

/// Higher face numbers under a one-girth hypothesis:
/// `C d^{i - 1/r - ... - 1/r^i} n^{1 + 1/r + ... + 1/r^i}`.
pub fn fi_bound(n: f64, d: f64, r: u32, i: u32, c: f64) -> f64 {
    let geo = geometric_tail(r, i);
    c * d.powf(i as f64 - geo) * n.powf(1.0 + geo)
}

fn geometric_tail(r: u32, i: u32) -> f64 {
    (1..=i).map(|k| (r as f64).powi(-(k as i32))).sum()
}

/// The conjectured sharp variant with coefficient `1/(i+1)! + eps` and
/// factors `(d-1)^{1-1/r^i} (d-2)^{1-1/r^{i-1}} ... (d-i)^{1-1/r}`.
pub fn fi_bound_conjectured(n: f64, d: f64, r: u32, i: u32, eps: f64) -> f64 {
    let factorial: f64 = (1..=(i as u64 + 1)).map(|k| k as f64).product();
    let mut value = (1.0 / factorial + eps) * n.powf(1.0 + geometric_tail(r, i));
    for j in 1..=i {
        let exponent = 1.0 - (r as f64).powi(-((i + 1 - j) as i32));
        value *= (d - j as f64).powf(exponent);
    }
    value
}

/// The general conjectural bound `C d^{i - a_{p,r,i}} n^{a_{p,r,i}}`.
pub fn gen_conjecture_bound(n: f64, d: f64, p: u32, r: u32, i: u32, c: f64) -> Result<f64> {
    let a = a_exponent(p, r, i)?;
    let a = a
        .to_f64()
        .ok_or_else(|| Error::Inconsistency("exponent overflow".into()))?;
    Ok(c * d.powf(i as f64 - a) * n.powf(a))
}

/// Generator-quality floor `C n^{p - p/(2^p - 1)}`.
pub fn existence_floor_crosspoly(n: f64, p: u32, c: f64) -> f64 {
    let exponent = p as f64 - p as f64 / ((1u64 << p) as f64 - 1.0);
    c * n.powf(exponent)
}

/// Generator-quality floor `C n^{5/2} k^{-3/2}`.
pub fn existence_floor_2d(n: f64, k: f64, c: f64) -> f64 {
    c * n.powf(2.5) * k.powf(-1.5)
}

/// `base^(num/den)` as an exact rational when the root comes out clean.
fn exact_pow(base: u64, exp: &BigRational) -> Option<BigRational> {
    if base == 0 {
        return if exp.is_zero() {
            Some(BigRational::one())
        } else {
            None
        };
    }
    let num = exp.numer().to_i64()?;
    let den = exp.denom().to_u32()?;
    let root = integer_root(base, den)?;
    let powed = BigRational::from_integer(BigInt::from(root)).pow(num.unsigned_abs() as u32 as i32);
    Some(if num < 0 { powed.recip() } else { powed })
}

fn integer_root(x: u64, k: u32) -> Option<u64> {
    if k == 1 {
        return Some(x);
    }
    let guess = (x as f64).powf(1.0 / k as f64).round() as u64;
    (guess.saturating_sub(2)..=guess + 2)
        .find(|&cand| cand.checked_pow(k).map(|v| v == x).unwrap_or(false))
}

/// Decides `measured <= C * Π base^exp`: exactly, when every factor is
/// rational (integer base, clean root); otherwise in floating point with
/// a 1e-9 relative guard band.
pub fn upper_bound_pass(measured: u64, coeff: f64, factors: &[(u64, BigRational)]) -> bool {
    let exact: Option<BigRational> = BigRational::from_f64(coeff).and_then(|c0| {
        factors.iter().try_fold(c0, |acc, (base, exp)| {
            exact_pow(*base, exp).map(|f| acc * f)
        })
    });
    match exact {
        Some(bound) if !bound.is_negative() => {
            BigRational::from_integer(BigInt::from(measured)) <= bound
        }
        _ => {
            let bound: f64 = coeff
                * factors
                    .iter()
                    .map(|(b, e)| (*b as f64).powf(e.to_f64().unwrap_or(f64::NAN)))
                    .product::<f64>();
            (measured as f64) <= bound * (1.0 + 1e-9) + 1e-12
        }
    }
}

/// The multiplicity inequality
/// `f_{d-1} <= n (n-1) ... (n-d+1) / Π (gr_{p-1} - 1)`, with each girth
/// capped at `n - d + p + 1` (its resolution-shift value) so infinite
/// girths stay finite in the denominator. Evaluated exactly.
pub fn multiplicity_bound(c: &SimplicialComplex, params: &SearchParams) -> Result<BoundReport> {
    let n = c.vertex_count();
    let d = (c.dim() + 1).max(0) as usize;
    if d == 0 || n == 0 {
        return Err(Error::domain(
            "multiplicity bound needs at least one vertex",
        ));
    }
    let girths = girth_all(c, params)?;
    let mut numerator = BigInt::one();
    for t in 0..d {
        numerator *= BigInt::from(n - t);
    }
    let mut denominator = BigInt::one();
    let mut capped = Vec::new();
    for (idx, w) in girths.iter().enumerate() {
        let p = idx + 1;
        let cap = (n - d + p + 1) as u32;
        let effective = match w.value {
            GirthValue::Finite(g) => g.min(cap),
            GirthValue::Infinite => {
                capped.push(p - 1);
                cap
            }
        };
        denominator *= BigInt::from(effective - 1);
    }
    let bound = BigRational::new(numerator, denominator);
    let measured = c.f(d as isize - 1) as u64;
    let pass = BigRational::from_integer(BigInt::from(measured)) <= bound;
    let mut parameters = BTreeMap::new();
    parameters.insert("n".into(), serde_json::json!(n));
    parameters.insert("d".into(), serde_json::json!(d));
    parameters.insert(
        "girths".into(),
        serde_json::json!(girths
            .iter()
            .map(|w| w.value.to_string())
            .collect::<Vec<_>>()),
    );
    let notes = if capped.is_empty() {
        format!("e(S/I) = f_{{d-1}} = {measured}")
    } else {
        format!(
            "e(S/I) = f_{{d-1}} = {measured}; infinite girths at degrees {capped:?} \
             capped at n-d+p+1"
        )
    };
    Ok(BoundReport {
        bound_name: "multiplicity".into(),
        parameters,
        bound_value: bound.to_f64().unwrap_or(f64::NAN),
        measured_value: measured as f64,
        pass,
        notes,
    })
}
