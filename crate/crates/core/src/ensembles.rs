//! Frequencies over many replicas: the counting constructor, exact deviant
//! weights of multinomial outcome distributions, partitions of unity and
//! their class keys.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{CtError, Result};
use crate::kernel::{Attribute, Variable};
use crate::label::{common_denominator, rational_to_f64, render_rational, snap_rational, Label};
use crate::linalg::{self, CVec, C64};
use crate::predicates::{is_generalised_mixture, Evidence, PredicateReport};
use crate::quantum::{build_measurer, Branch, Labeling, MeasurerSpec};
use crate::state::QState;
use crate::tolerance::tol;

/// Largest number of frequency vectors enumerated by `deviant_weight`.
pub const COMPOSITION_GUARD: u128 = 10_000_000;

/// `f(x; s)`: fraction of entries of `s` equal to `x`.
pub fn frequency(x: &Label, s: &[Label]) -> Result<BigRational> {
    if s.is_empty() {
        return Err(CtError::Domain("frequency of an empty string".into()));
    }
    let count = s.iter().filter(|l| *l == x).count();
    Ok(BigRational::new(BigInt::from(count), BigInt::from(s.len())))
}

/// Measurer writing `f(x; s)` for strings of length `n` over a `d`-dimensional
/// basis, where `x` is basis index `x_index`. Outcome `i/n` is written as `|i>`.
pub fn build_counting_constructor(x_index: usize, n: usize, d: usize) -> Result<MeasurerSpec> {
    if x_index >= d || n == 0 {
        return Err(CtError::Domain("counting constructor needs n >= 1 and a valid basis index".into()));
    }
    let size = (d as u128).checked_pow(n as u32).filter(|s| s * (n as u128 + 1) <= 1024);
    let Some(size) = size else {
        return Err(CtError::Size(format!("{d}^{n} strings exceed the counting-constructor guard")));
    };
    let size = size as usize;
    let dims = vec![d; n];
    let label = |k: usize| Label::Num(BigRational::new(BigInt::from(k), BigInt::from(n)));
    let branches = (0..size)
        .map(|idx| {
            let count = linalg::digits(idx, &dims).iter().filter(|&&v| v == x_index).count();
            Branch { label: label(count), source: linalg::basis_vector(size, idx), target: linalg::basis_vector(n + 1, count) }
        })
        .collect();
    let declared = (0..=n).map(|k| (label(k), linalg::basis_vector(n + 1, k))).collect();
    MeasurerSpec::from_branches(dims, n + 1, branches, linalg::basis_vector(n + 1, 0), declared)
}

/// Outcome probabilities `|c_x|^2`.
#[derive(Debug, Clone, PartialEq)]
pub enum Probabilities {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

/// An amplitude given exactly as `sqrt(p)` or numerically.
#[derive(Debug, Clone, PartialEq)]
pub enum Amplitude {
    Sqrt(BigRational),
    Complex(C64),
}

impl Probabilities {
    /// Probabilities from amplitudes; exact when every amplitude is exact.
    pub fn from_amplitudes(amps: &[Amplitude]) -> Result<Self> {
        if amps.iter().all(|a| matches!(a, Amplitude::Sqrt(_))) {
            let ps = amps
                .iter()
                .map(|a| match a {
                    Amplitude::Sqrt(p) => p.clone(),
                    Amplitude::Complex(_) => unreachable!(),
                })
                .collect();
            return Probabilities::exact(ps);
        }
        let ps = amps
            .iter()
            .map(|a| match a {
                Amplitude::Sqrt(p) => rational_to_f64(p),
                Amplitude::Complex(c) => c.norm_sqr(),
            })
            .collect();
        Probabilities::float(ps)
    }

    pub fn exact(ps: Vec<BigRational>) -> Result<Self> {
        if ps.is_empty() {
            return Err(CtError::Domain("no outcomes".into()));
        }
        if ps.iter().any(|p| p < &BigRational::zero()) {
            return Err(CtError::Domain("negative probability".into()));
        }
        let sum: BigRational = ps.iter().sum();
        if !sum.is_one() {
            return Err(CtError::Domain(format!("probabilities sum to {}, not 1", render_rational(&sum))));
        }
        Ok(Probabilities::Exact(ps))
    }

    pub fn float(ps: Vec<f64>) -> Result<Self> {
        if ps.is_empty() {
            return Err(CtError::Domain("no outcomes".into()));
        }
        if ps.iter().any(|p| !p.is_finite() || *p < -tol()) {
            return Err(CtError::Domain("invalid probability".into()));
        }
        let sum: f64 = ps.iter().sum();
        if (sum - 1.0).abs() > tol() {
            return Err(CtError::Domain(format!("squared amplitudes sum to {sum}, not 1")));
        }
        Ok(Probabilities::Float(ps))
    }

    pub fn len(&self) -> usize {
        match self {
            Probabilities::Exact(p) => p.len(),
            Probabilities::Float(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_f64(&self) -> Vec<f64> {
        match self {
            Probabilities::Exact(p) => p.iter().map(rational_to_f64).collect(),
            Probabilities::Float(p) => p.clone(),
        }
    }
}

/// Exact deviant weight `numer / denom_base^n`, kept unreduced so the
/// denominator shows the common denominator of the probabilities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactWeight {
    pub numer: BigUint,
    pub denom_base: BigUint,
    pub exponent: usize,
    /// Weight of the complementary (non-deviant) strings, same denominator.
    pub typical_numer: BigUint,
}

impl ExactWeight {
    pub fn denominator(&self) -> BigUint {
        num_traits::pow(self.denom_base.clone(), self.exponent)
    }

    pub fn value(&self) -> BigRational {
        BigRational::new(BigInt::from(self.numer.clone()), BigInt::from(self.denominator()))
    }

    /// `numer/denominator` without reduction, e.g. `352/1024`.
    pub fn render(&self) -> String {
        format!("{}/{}", self.numer, self.denominator())
    }

    /// Deviant plus typical weight is exactly one.
    pub fn normalized(&self) -> bool {
        &self.numer + &self.typical_numer == self.denominator()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub epsilon: BigRational,
    pub exact: Option<ExactWeight>,
    pub float: f64,
}

impl ConvergenceRow {
    /// CSV rendering: `N,epsilon,deviant_weight_exact,deviant_weight_float`.
    pub fn csv(&self) -> String {
        let exact = self.exact.as_ref().map(ExactWeight::render).unwrap_or_default();
        format!("{},{},{},{}", self.n, render_rational(&self.epsilon), exact, format_float(self.float))
    }
}

/// Shortest round-trip decimal rendering.
pub fn format_float(x: f64) -> String {
    let s = format!("{x}");
    if s.contains('e') || s.contains('.') || s.contains("inf") || s.contains("NaN") {
        s
    } else {
        format!("{s}.0")
    }
}

fn composition_count(n: usize, d: usize) -> u128 {
    // C(n + d - 1, d - 1)
    let mut acc: u128 = 1;
    for i in 1..d as u128 {
        acc = acc.saturating_mul(n as u128 + i) / i;
        if acc > COMPOSITION_GUARD * 1000 {
            return acc;
        }
    }
    acc
}

/// Visit every vector `k` of `d` non-negative integers summing to `n`.
fn for_each_composition(n: usize, d: usize, f: &mut impl FnMut(&[usize])) {
    fn go(rest: usize, slot: usize, k: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if slot + 1 == k.len() {
            k[slot] = rest;
            f(k);
            return;
        }
        for v in 0..=rest {
            k[slot] = v;
            go(rest - v, slot + 1, k, f);
        }
    }
    let mut k = vec![0; d];
    go(n, 0, &mut k, f);
}

/// Total weight of length-`n` strings whose frequency vector deviates from
/// the probabilities by `δ = Σ_x (k_x/n − p_x)^2 > ε`.
pub fn deviant_weight(probs: &Probabilities, n: usize, epsilon: &BigRational) -> Result<ConvergenceRow> {
    if n == 0 {
        return Err(CtError::Domain("N must be positive".into()));
    }
    if epsilon < &BigRational::zero() {
        return Err(CtError::Domain("epsilon must be non-negative".into()));
    }
    let d = probs.len();
    let count = composition_count(n, d);
    if count > COMPOSITION_GUARD {
        return Err(CtError::Size(format!("{count} frequency vectors exceed the guard of {COMPOSITION_GUARD}")));
    }
    match probs {
        Probabilities::Exact(ps) => {
            let exact = exact_weight(ps, n, epsilon);
            let float = rational_to_f64(&exact.value());
            Ok(ConvergenceRow { n, epsilon: epsilon.clone(), exact: Some(exact), float })
        }
        Probabilities::Float(ps) => {
            let eps = rational_to_f64(epsilon);
            Ok(ConvergenceRow { n, epsilon: epsilon.clone(), exact: None, float: float_weight(ps, n, eps) })
        }
    }
}

fn exact_weight(ps: &[BigRational], n: usize, epsilon: &BigRational) -> ExactWeight {
    let den = common_denominator(ps);
    let den_i = BigInt::from(den.clone());
    // p_x = a_x / D with integer a_x.
    let a: Vec<BigUint> = ps
        .iter()
        .map(|p| (p * BigRational::from_integer(den_i.clone())).to_integer().to_biguint().expect("non-negative"))
        .collect();
    let a_i: Vec<BigInt> = a.iter().map(|v| BigInt::from(v.clone())).collect();
    let n_i = BigInt::from(n);
    // δ > ε  ⇔  e_d Σ (k_x D − a_x N)^2 > e_n N^2 D^2
    let rhs = epsilon.numer() * &n_i * &n_i * &den_i * &den_i;
    let e_d = epsilon.denom().clone();
    let mut fact = vec![BigUint::one(); n + 1];
    for i in 1..=n {
        fact[i] = &fact[i - 1] * BigUint::from(i);
    }
    // Powers a_x^k for k = 0..=n.
    let powers: Vec<Vec<BigUint>> = a
        .iter()
        .map(|ax| {
            let mut row = Vec::with_capacity(n + 1);
            let mut cur = BigUint::one();
            for _ in 0..=n {
                row.push(cur.clone());
                cur *= ax;
            }
            row
        })
        .collect();
    let mut deviant = BigUint::zero();
    let mut typical = BigUint::zero();
    for_each_composition(n, ps.len(), &mut |k| {
        let mut term = fact[n].clone();
        for (x, &kx) in k.iter().enumerate() {
            if kx > 0 && a[x].is_zero() {
                return;
            }
            term /= &fact[kx];
        }
        for (x, &kx) in k.iter().enumerate() {
            term *= &powers[x][kx];
        }
        let dev: BigInt = k
            .iter()
            .zip(&a_i)
            .map(|(&kx, ax)| {
                let diff = BigInt::from(kx) * &den_i - ax * &n_i;
                &diff * &diff
            })
            .sum();
        if &e_d * dev > rhs {
            deviant += term;
        } else {
            typical += term;
        }
    });
    ExactWeight { numer: deviant, denom_base: den, exponent: n, typical_numer: typical }
}

fn float_weight(ps: &[f64], n: usize, eps: f64) -> f64 {
    let mut ln_fact = vec![0.0f64; n + 1];
    for i in 1..=n {
        ln_fact[i] = ln_fact[i - 1] + (i as f64).ln();
    }
    let nf = n as f64;
    let mut total = 0.0;
    for_each_composition(n, ps.len(), &mut |k| {
        let delta: f64 = k.iter().zip(ps).map(|(&kx, p)| (kx as f64 / nf - p).powi(2)).sum();
        // Ties with ε are not deviant; absorb rounding in δ.
        if delta <= eps + 1e-12 * eps.max(1e-300) + 4.0 * f64::EPSILON * delta {
            return;
        }
        let mut ln = ln_fact[n];
        for (&kx, &p) in k.iter().zip(ps) {
            if kx == 0 {
                continue;
            }
            if p <= 0.0 {
                return;
            }
            ln += kx as f64 * p.ln() - ln_fact[kx];
        }
        total += ln.exp();
    });
    total
}

/// The X-partition of unity `[Tr(ρ P_x)]` of an attribute, in member order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionOfUnity {
    pub entries: Vec<(Label, f64)>,
}

impl PartitionOfUnity {
    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|(_, v)| *v).collect()
    }

    /// Snap every entry to the simplest rational within `1e-9` with
    /// denominator at most `10^6`; `None` unless the snapped values sum to 1.
    pub fn snapped(&self) -> Option<Vec<BigRational>> {
        let r: Option<Vec<BigRational>> =
            self.entries.iter().map(|(_, v)| snap_rational(v.max(0.0), 1e-9, 1_000_000)).collect();
        let r = r?;
        let sum: BigRational = r.iter().sum();
        sum.is_one().then_some(r)
    }

    /// Exact probabilities when snapping succeeds, floating point otherwise.
    pub fn probabilities(&self) -> Result<Probabilities> {
        match self.snapped() {
            Some(r) => Probabilities::exact(r),
            None => Probabilities::float(self.values()),
        }
    }
}

pub fn partition_of_unity(z: &QState, x: &Variable) -> Result<PartitionOfUnity> {
    let attr = Attribute::states(x.substrate(), vec![z.clone()])?;
    for (k, (_, a)) in x.members().iter().enumerate() {
        if attr.is_subset(a)? {
            let entries = x.labels().into_iter().enumerate().map(|(j, l)| (l, if j == k { 1.0 } else { 0.0 })).collect();
            return Ok(PartitionOfUnity { entries });
        }
    }
    if !is_generalised_mixture(&attr, x)?.verdict {
        return Err(CtError::Domain(format!("{z} is not a generalised mixture of the variable")));
    }
    let mut entries = Vec::with_capacity(x.len());
    for (l, a) in x.members() {
        entries.push((l.clone(), z.expectation(&a.projector()?).clamp(0.0, 1.0)));
    }
    let sum: f64 = entries.iter().map(|(_, v)| v).sum();
    for e in entries.iter_mut() {
        e.1 /= sum;
    }
    Ok(PartitionOfUnity { entries })
}

/// Partition of unity over an observable whose members are mutually
/// orthogonal subspaces with the given orthonormal bases. Member weights
/// decide sharpness and the generalised-mixture test directly.
pub(crate) fn partition_over_spans(z: &QState, x: &Variable, bases: &[Vec<CVec>]) -> Result<PartitionOfUnity> {
    if z.dim() != x.substrate().size() {
        return Err(CtError::DimensionMismatch { expected: x.substrate().size(), found: z.dim() });
    }
    let weights: Vec<f64> = bases
        .iter()
        .map(|b| match z {
            QState::Pure(p) => linalg::weight_in_span_pure(b, p.vector()),
            QState::Mixed(m) => linalg::weight_in_span(b, m.matrix()),
        })
        .collect();
    let labels = x.labels();
    if let Some(k) = weights.iter().position(|w| *w >= 1.0 - tol()) {
        let entries = labels.into_iter().enumerate().map(|(j, l)| (l, if j == k { 1.0 } else { 0.0 })).collect();
        return Ok(PartitionOfUnity { entries });
    }
    let sum: f64 = weights.iter().map(|w| w.clamp(0.0, 1.0)).sum();
    if sum < 1.0 - tol() {
        return Err(CtError::Domain(format!("{z} is not a generalised mixture of the variable")));
    }
    let entries = labels.into_iter().zip(weights).map(|(l, w)| (l, w.clamp(0.0, 1.0) / sum)).collect();
    Ok(PartitionOfUnity { entries })
}

/// Canonical key of the X-indistinguishability class: entries sorted by
/// label and rounded to multiples of `1e-9`.
pub fn class_key(z: &QState, x: &Variable) -> Result<Vec<(Label, i64)>> {
    let p = partition_of_unity(z, x)?;
    let mut key: Vec<(Label, i64)> = p.entries.into_iter().map(|(l, v)| (l, (v * 1e9).round() as i64)).collect();
    key.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(key)
}

/// Rows of an N-sweep and whether they support convergence.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    pub monotone: bool,
    pub final_below_bound: bool,
    pub sums_to_one: bool,
    pub bound: f64,
}

impl ConvergenceReport {
    pub fn pass(&self) -> bool {
        self.monotone && self.final_below_bound && self.sums_to_one
    }
}

/// Deviant weights along an N-sweep: non-increasing, final value below `bound`.
pub fn verify_convergence(
    probs: &Probabilities,
    n_sweep: &[usize],
    epsilon: &BigRational,
    bound: f64,
) -> Result<ConvergenceReport> {
    let rows = n_sweep.iter().map(|&n| deviant_weight(probs, n, epsilon)).collect::<Result<Vec<_>>>()?;
    let monotone = rows.windows(2).all(|w| match (&w[0].exact, &w[1].exact) {
        (Some(a), Some(b)) => b.value() <= a.value(),
        _ => w[1].float <= w[0].float + 1e-12,
    });
    let final_below_bound = rows.last().is_some_and(|r| r.float < bound);
    let sums_to_one = match probs {
        Probabilities::Exact(p) => p.iter().sum::<BigRational>().is_one(),
        Probabilities::Float(p) => (p.iter().sum::<f64>() - 1.0).abs() <= 1e-12,
    } && rows.iter().all(|r| r.exact.as_ref().is_none_or(ExactWeight::normalized));
    Ok(ConvergenceReport { rows, monotone, final_below_bound, sums_to_one, bound })
}

/// Convergence check for the partition of unity of `z` with respect to `x`.
pub fn verify_e1_e2(
    z: &QState,
    x: &Variable,
    n_sweep: &[usize],
    epsilon: &BigRational,
    bound: f64,
) -> Result<ConvergenceReport> {
    let partition = partition_of_unity(z, x)?;
    verify_convergence(&partition.probabilities()?, n_sweep, epsilon, bound)
}

/// Measuring `X` on `y` leaves the source and the target with the same
/// partition of unity that `y` had.
pub fn intrinsic_partition_preserved(y: &QState, x: &Variable) -> Result<PredicateReport> {
    let before = partition_of_unity(y, x)?;
    let m = build_measurer(x, &Labeling::standard(x.len(), x.len().max(2))?)?;
    let joint = m.measure(y)?.density();
    let ns = m.source_dims().len();
    let source = joint.reduce(&(0..ns).collect::<Vec<_>>())?;
    let target = joint.reduce(&[ns])?;
    let after_source = partition_of_unity(&QState::Mixed(source), x)?;
    let after_target: Vec<f64> = m
        .declared()
        .iter()
        .map(|(_, v): &(Label, CVec)| target.expectation(&linalg::outer(v, v)))
        .collect();
    let b = before.values();
    let close = |u: &[f64]| u.len() == b.len() && u.iter().zip(&b).all(|(p, q)| (p - q).abs() <= 1e-9);
    let src_ok = close(&after_source.values());
    let tgt_ok = close(&after_target);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.9}")).collect::<Vec<_>>().join(", ");
    Ok(PredicateReport {
        predicate: "intrinsic partition preserved".into(),
        subject: y.to_string(),
        verdict: src_ok && tgt_ok,
        evidence: vec![
            Evidence::note("input", fmt(&b)),
            Evidence::note("source after measurement", fmt(&after_source.values())),
            Evidence::note("target after measurement", fmt(&after_target)),
        ],
    })
}

/// Floating value of an exact or float deviant weight.
pub fn weight_f64(row: &ConvergenceRow) -> f64 {
    row.exact.as_ref().and_then(|e| e.value().to_f64()).unwrap_or(row.float)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{validate_variable, SubstrateSpec};
    use crate::state::{MixedState, PureState};

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn basis_var(d: usize) -> Variable {
        let sub = SubstrateSpec::quantum("q", d).unwrap();
        validate_variable(
            (0..d).map(|k| (Label::int(k as i64), Attribute::pure(&sub, PureState::basis(d, k)).unwrap())).collect(),
        )
        .unwrap()
    }

    #[test]
    fn frequency_examples() {
        let s: Vec<Label> = [0, 1, 0].iter().map(|&v| Label::int(v)).collect();
        assert_eq!(frequency(&Label::int(0), &s).unwrap(), q(2, 3));
        assert_eq!(frequency(&Label::int(2), &s).unwrap(), q(0, 1));
    }

    #[test]
    fn fair_coin_n10() {
        let p = Probabilities::exact(vec![q(1, 2), q(1, 2)]).unwrap();
        let row = deviant_weight(&p, 10, &q(1, 50)).unwrap();
        let e = row.exact.as_ref().unwrap();
        assert_eq!(e.render(), "352/1024");
        assert!(e.normalized());
        assert_eq!(row.csv(), "10,0.02,352/1024,0.34375");
    }

    #[test]
    fn deterministic_and_single_replica() {
        let p = Probabilities::exact(vec![q(1, 1), q(0, 1)]).unwrap();
        assert!(deviant_weight(&p, 7, &q(1, 100)).unwrap().exact.unwrap().numer.is_zero());
        let half = Probabilities::exact(vec![q(1, 2), q(1, 2)]).unwrap();
        assert_eq!(deviant_weight(&half, 1, &q(1, 50)).unwrap().exact.unwrap().value(), q(1, 1));
    }

    #[test]
    fn float_path_matches_exact() {
        let exact = Probabilities::exact(vec![q(1, 3), q(2, 3)]).unwrap();
        let float = Probabilities::float(vec![1.0 / 3.0, 2.0 / 3.0]).unwrap();
        for n in [9, 30] {
            let a = deviant_weight(&exact, n, &q(1, 50)).unwrap();
            let b = deviant_weight(&float, n, &q(1, 50)).unwrap();
            assert!((a.float - b.float).abs() < 1e-9, "{n}: {} vs {}", a.float, b.float);
        }
    }

    #[test]
    fn counting_constructor_examples() {
        let m = build_counting_constructor(0, 3, 2).unwrap();
        let s010 = PureState::basis(2, 0).tensor(&PureState::basis(2, 1)).tensor(&PureState::basis(2, 0));
        let out = m.measure(&QState::Pure(s010)).unwrap();
        assert_eq!(m.sharp_outcome(&out), Some(Label::ratio(2, 3)));
        let v = 1.0 / 3f64.sqrt();
        let mut amps = vec![0.0; 8];
        for i in [1, 2, 4] {
            amps[i] = v;
        }
        let sup = PureState::from_real(&amps).unwrap().regroup(vec![2, 2, 2]).unwrap();
        let out = m.measure(&QState::Pure(sup)).unwrap();
        assert_eq!(m.sharp_outcome(&out), Some(Label::ratio(2, 3)));
        let mut ghz = vec![0.0; 8];
        ghz[0] = S;
        ghz[7] = S;
        let out = m.measure(&QState::Pure(PureState::from_real(&ghz).unwrap().regroup(vec![2, 2, 2]).unwrap())).unwrap();
        assert_eq!(m.sharp_outcome(&out), None);
    }

    #[test]
    fn partitions_and_keys() {
        let x = basis_var(2);
        let plus = QState::Pure(PureState::from_real(&[S, S]).unwrap());
        let minus = QState::Pure(PureState::from_real(&[S, -S]).unwrap());
        let mixed = QState::Mixed(MixedState::maximally_mixed(2));
        assert_eq!(class_key(&plus, &x).unwrap(), class_key(&mixed, &x).unwrap());
        assert_eq!(class_key(&plus, &x).unwrap(), class_key(&minus, &x).unwrap());
        let zero = QState::Pure(PureState::basis(2, 0));
        let one = QState::Pure(PureState::basis(2, 1));
        assert_ne!(class_key(&zero, &x).unwrap(), class_key(&one, &x).unwrap());
        let p = partition_of_unity(&plus, &x).unwrap();
        assert_eq!(p.snapped().unwrap(), vec![q(1, 2), q(1, 2)]);
    }

    #[test]
    fn outside_span_is_domain_error() {
        let sub = SubstrateSpec::quantum("q", 3).unwrap();
        let x = validate_variable(vec![
            (Label::int(0), Attribute::pure(&sub, PureState::basis(3, 0)).unwrap()),
            (Label::int(1), Attribute::pure(&sub, PureState::basis(3, 1)).unwrap()),
        ])
        .unwrap();
        let z = QState::Pure(PureState::basis(3, 2));
        assert!(matches!(partition_of_unity(&z, &x), Err(CtError::Domain(_))));
    }

    #[test]
    fn plus_converges() {
        let x = basis_var(2);
        let plus = QState::Pure(PureState::from_real(&[S, S]).unwrap());
        let r = verify_e1_e2(&plus, &x, &[10, 20, 50, 100, 200], &q(1, 50), 0.005).unwrap();
        assert!(r.pass(), "{:?}", r.rows.iter().map(|r| r.float).collect::<Vec<_>>());
    }

    #[test]
    fn measurement_preserves_partition() {
        let x = basis_var(2);
        let y = QState::Pure(PureState::from_real(&[(1.0f64 / 3.0).sqrt(), (2.0f64 / 3.0).sqrt()]).unwrap());
        assert!(intrinsic_partition_preserved(&y, &x).unwrap().verdict);
    }
}
