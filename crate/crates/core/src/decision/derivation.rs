//! Value derivations as chains of rule applications, each step re-checked
//! against the quantum backend.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::adder::{AdderRealization, AdderSpec};
use super::game::{
    compose_games, game_value, game_value_exact, label_permutation, make_game, observable_permutation_unitary,
    payoff_observable, transform_game, Game, Transform,
};
use crate::error::{CtError, Result};
use crate::kernel::{validate_variable, Attribute, SubstrateSpec, Variable};
use crate::label::{rational_to_f64, render_rational, Label};
use crate::linalg::{self, CVec};
use crate::predicates::is_generalised_mixture;
use crate::quantum::{build_measurer, Branch, LabelPermutation, Labeling, MeasurerSpec};
use crate::state::{PureState, QState};

/// Largest denominator accepted by `derive_value`.
pub const MAX_DENOMINATOR: u64 = 64;

const CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rule {
    Substitutability,
    Additivity,
    MeasurementNeutrality,
    ShiftRule,
    ReflectionRule,
    EqualValue,
    SymmetricBase,
    NonSymmetric,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivationStep {
    pub rule: Rule,
    pub premises: Vec<String>,
    pub conclusion: String,
    pub check: bool,
    /// What the backend computed to certify the step.
    pub evidence: String,
}

impl DerivationStep {
    fn new(rule: Rule, premises: Vec<String>, conclusion: String, check: bool, evidence: String) -> Self {
        DerivationStep { rule, premises, conclusion, check, evidence }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivationTrace {
    pub steps: Vec<DerivationStep>,
    #[serde(serialize_with = "ser_rational")]
    pub final_value: BigRational,
    /// Whether the two-register preparation used for unequal weights was
    /// built; `None` when the derivation did not need it.
    pub target_preparation_available: Option<bool>,
}

fn ser_rational<S: serde::Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&render_rational(v))
}

impl DerivationTrace {
    pub fn all_pass(&self) -> bool {
        self.steps.iter().all(|s| s.check)
    }

    pub fn final_f64(&self) -> f64 {
        rational_to_f64(&self.final_value)
    }

    /// One line per step: `step <i>: <rule> | <equation> | check=<pass|fail>`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.steps.iter().enumerate() {
            let verdict = if s.check { "pass" } else { "fail" };
            out.push_str(&format!("step {}: {} | {} | check={}\n", i + 1, s.rule, s.conclusion, verdict));
        }
        out
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= CHECK_TOL
}

fn r(v: &BigRational) -> String {
    render_rational(v)
}

fn pure_attr(sub: &Arc<SubstrateSpec>, v: &CVec) -> Result<Attribute> {
    Attribute::pure(sub, PureState::from_vector(v.clone(), sub.atom_sizes())?)
}

fn state_attr(sub: &Arc<SubstrateSpec>, s: QState) -> Result<Attribute> {
    Attribute::states(sub, vec![s])
}

/// The single state of an attribute.
fn only_state(a: &Attribute) -> Result<QState> {
    a.single_state().cloned().ok_or_else(|| CtError::Precondition(format!("{} is not a single state", a.describe())))
}

/// Equal-value procedure: measure `h` on `q`, check the intrinsic part is
/// still a generalised mixture of `h`, replace every member by the first one
/// under control of the measurement target, and compare game values.
pub fn check_equal_value(x: &Variable, h: &Variable, q: &Attribute) -> Result<DerivationStep> {
    if h.is_empty() {
        return Err(CtError::Precondition("empty variable".into()));
    }
    let mut values = Vec::with_capacity(h.len());
    for (l, a) in h.members() {
        values.push((l.clone(), game_value(&make_game(x, a)?)?));
    }
    let v = values[0].1;
    if let Some((l, w)) = values.iter().find(|(_, w)| !close(*w, v)) {
        return Err(CtError::Precondition(format!(
            "games with `{}` and `{l}` have values {v} and {w}",
            values[0].0
        )));
    }
    let direct = game_value(&make_game(x, q)?)?;
    let premises = values.iter().map(|(l, w)| format!("V(G_X({l})) = {w}")).collect();
    let conclusion = format!("V(G_X({})) = {v}", q.describe());
    for (l, a) in h.members() {
        if q.set_eq(a)? {
            let check = close(direct, v);
            return Ok(DerivationStep::new(
                Rule::EqualValue,
                premises,
                conclusion,
                check,
                format!("trivial: equals member {l}; direct value {direct}"),
            ));
        }
    }
    if !is_generalised_mixture(q, h)?.verdict {
        return Err(CtError::Precondition(format!("{} is not a generalised mixture of the variable", q.describe())));
    }
    let z = only_state(q)?;
    let m = build_measurer(h, &Labeling::standard(h.len(), h.len().max(2))?)?;
    let joint = m.measure(&z)?.density();
    let ns = m.source_dims().len();
    let src: Vec<usize> = (0..ns).collect();
    let intrinsic = joint.reduce(&src)?;
    let intrinsic_attr = state_attr(h.substrate(), QState::Mixed(intrinsic.clone()))?;
    let still_mixture = is_generalised_mixture(&intrinsic_attr, h)?.verdict;
    let intrinsic_value = game_value(&make_game(x, &intrinsic_attr)?)?;

    // Controlled replacement h_i -> h_1 conditioned on the target reading 'h_i'.
    let labels = h.labels();
    let ds = m.source_dim();
    let dt = m.target_dim();
    let mut control = linalg::identity(ds * dt);
    for (i, (_, t)) in m.declared().iter().enumerate() {
        let p_t = linalg::outer(t, t);
        let swap = if i == 0 {
            linalg::identity(ds)
        } else {
            let pi = LabelPermutation::transposition(&labels, &labels[0], &labels[i])?;
            observable_permutation_unitary(h, &pi)?
        };
        control += linalg::kron(&(swap - linalg::identity(ds)), &p_t);
    }
    if !linalg::is_unitary(&control, 1e-9) {
        return Err(CtError::Precondition("controlled replacement is not unitary".into()));
    }
    let after = joint.apply(&control)?.reduce(&src)?;
    let after_attr = state_attr(h.substrate(), QState::Mixed(after))?;
    let replaced = after_attr.is_subset(&h.members()[0].1)?;
    let after_value = game_value(&make_game(x, &after_attr)?)?;
    let check = still_mixture && replaced && close(after_value, v) && close(intrinsic_value, v) && close(direct, v);
    let evidence = format!(
        "intrinsic part mixture={still_mixture}, replaced by {}={replaced}, values: direct {direct}, intrinsic {intrinsic_value}, after {after_value}",
        labels[0]
    );
    Ok(DerivationStep::new(Rule::EqualValue, premises, conclusion, check, evidence))
}

fn ratio(m: u64, n: u64) -> BigRational {
    BigRational::new(BigInt::from(m), BigInt::from(n))
}

fn qubit_game(sub: &Arc<SubstrateSpec>, x: &Variable, amps: &[f64]) -> Result<Game> {
    make_game(x, &Attribute::pure(sub, PureState::from_real(amps)?)?)
}

/// Payoffs `t_k` on the extended target, symmetric about zero within each
/// group, group one first.
fn target_labels(g1: usize, g2: usize) -> Vec<BigRational> {
    let half1 = g1 / 2;
    let mut out: Vec<BigRational> = Vec::with_capacity(g1 + g2);
    let sym = |size: usize, offset: usize, out: &mut Vec<BigRational>| {
        let h = size / 2;
        for k in (1..=h).rev() {
            out.push(-BigRational::from_integer(BigInt::from(offset + k)));
        }
        if size % 2 == 1 {
            out.push(BigRational::zero());
        }
        for k in 1..=h {
            out.push(BigRational::from_integer(BigInt::from(offset + k)));
        }
    };
    sym(g1, 0, &mut out);
    sym(g2, half1, &mut out);
    out
}

/// Derive `V(G_X(y))` for `f(y) = [m/n, (n−m)/n]` over payoffs `x1, x2`.
pub fn derive_value(m: u64, n: u64, x1: &BigRational, x2: &BigRational) -> Result<DerivationTrace> {
    if n > MAX_DENOMINATOR {
        return Err(CtError::Size(format!("denominator {n} exceeds {MAX_DENOMINATOR}")));
    }
    if n == 0 || m >= n {
        return Err(CtError::Domain(format!("weights need 0 <= m < n, got m={m}, n={n}")));
    }
    let expected = (ratio(m, n) * x1) + (ratio(n - m, n) * x2);
    let a = SubstrateSpec::quantum("a", 2)?;
    let fm = m as f64 / n as f64;
    let y_amps = [fm.sqrt(), (1.0 - fm).sqrt()];

    if x1 == x2 || m == 0 {
        // The game attribute is sharp in one payoff member.
        let (x, value) = if x1 == x2 {
            let span = Attribute::subspace(&a, vec![linalg::basis_vector(2, 0), linalg::basis_vector(2, 1)])?;
            (validate_variable(vec![(Label::Num(x1.clone()), span)])?, x1.clone())
        } else {
            (payoff_observable(&a, &[x1.clone(), x2.clone()])?, x2.clone())
        };
        let g = qubit_game(&a, &x, &y_amps)?;
        let member = x.attribute(&Label::Num(value.clone())).expect("member present");
        let sharp = g.attribute().is_subset(member)?;
        let v = game_value(&g)?;
        let step = DerivationStep::new(
            Rule::Substitutability,
            vec![format!("y sharp in X with value {}", r(&value))],
            format!("V(G_X(y)) = {}", r(&value)),
            sharp && close(v, rational_to_f64(&value)),
            format!("sharp={sharp}, game value {v}"),
        );
        return Ok(DerivationTrace { steps: vec![step], final_value: value, target_preparation_available: None });
    }

    let x = payoff_observable(&a, &[x1.clone(), x2.clone()])?;
    let labels = x.labels();
    let mut steps = symmetric_base(&a, &x, x1, x2)?;
    if 2 * m == n {
        return Ok(DerivationTrace { steps, final_value: expected, target_preparation_available: None });
    }

    // Unequal weights: two-register preparation.
    let (m2, n2) = if m % 2 == 1 && (n - m) % 2 == 1 { (2 * m, 2 * n) } else { (m, n) };
    let (g1, g2) = (m2 as usize, (n2 - m2) as usize);
    let nt = g1 + g2;
    let b = SubstrateSpec::quantum("b", nt)?;
    let ts = target_labels(g1, g2);
    let xt = payoff_observable(&b, &ts)?;
    let mut o1 = CVec::zeros(nt);
    let mut o2 = CVec::zeros(nt);
    for k in 0..g1 {
        o1[k] = linalg::c(1.0 / (g1 as f64).sqrt(), 0.0);
    }
    for k in g1..nt {
        o2[k] = linalg::c(1.0 / (g2 as f64).sqrt(), 0.0);
    }
    let y = PureState::from_real(&y_amps)?;
    let s_vec = linalg::kron_vec(&linalg::basis_vector(2, 0), &o1) * linalg::c(y_amps[0], 0.0)
        + linalg::kron_vec(&linalg::basis_vector(2, 1), &o2) * linalg::c(y_amps[1], 0.0);
    let s = PureState::from_vector(s_vec, vec![2, nt])?;

    // Preparation by an X-measurer writing o1, o2.
    let device = MeasurerSpec::from_branches(
        vec![2],
        nt,
        vec![
            Branch { label: labels[0].clone(), source: linalg::basis_vector(2, 0), target: o1.clone() },
            Branch { label: labels[1].clone(), source: linalg::basis_vector(2, 1), target: o2.clone() },
        ],
        linalg::basis_vector(nt, 0),
        vec![(labels[0].clone(), o1.clone()), (labels[1].clone(), o2.clone())],
    );
    let prepared = match &device {
        Ok(d) => {
            let out = d.measure(&QState::Pure(y.clone()))?;
            let same = out.as_pure().is_some_and(|p| p.same_ray(&s));
            same && d.measures(&x)?
        }
        Err(_) => false,
    };
    steps.push(DerivationStep::new(
        Rule::NonSymmetric,
        vec![format!("f(y) = [{}, {}]", r(&ratio(m, n)), r(&ratio(n - m, n)))],
        format!("|s> = sqrt({})|x1>|o1> + sqrt({})|x2>|o2> on a {nt}-dimensional target", r(&ratio(m, n)), r(&ratio(n - m, n))),
        prepared,
        format!("measurer output equals |s>: {prepared}"),
    ));

    // Reflection-invariant outputs have value zero.
    let refl = observable_permutation_unitary(&xt, &label_permutation(&xt, &Transform::Reflect)?)?;
    let o1s = PureState::from_vector(o1.clone(), vec![nt])?;
    let o2s = PureState::from_vector(o2.clone(), vec![nt])?;
    let inv1 = o1s.apply(&refl)?.same_ray(&o1s);
    let inv2 = o2s.apply(&refl)?.same_ray(&o2s);
    let orth = o1s.orthogonal_to(&o2s);
    let v_o1 = game_value(&make_game(&xt, &pure_attr(&b, &o1)?)?)?;
    let v_o2 = game_value(&make_game(&xt, &pure_attr(&b, &o2)?)?)?;
    steps.push(DerivationStep::new(
        Rule::ReflectionRule,
        vec!["R(o1) = o1".into(), "R(o2) = o2".into(), "<o1|o2> = 0".into()],
        "V(G_X'(o1)) = V(G_X'(o2)) = 0".into(),
        inv1 && inv2 && orth && close(v_o1, 0.0) && close(v_o2, 0.0),
        format!("invariant: {inv1}, {inv2}; orthogonal: {orth}; values {v_o1}, {v_o2}"),
    ));

    // The target's intrinsic part is a mixture of o1, o2: value zero.
    let joint = s.density();
    let rho_b = joint.reduce(&[1])?;
    let h = validate_variable(vec![
        (Label::sym("o1"), pure_attr(&b, &o1)?),
        (Label::sym("o2"), pure_attr(&b, &o2)?),
    ])?;
    let b_attr = state_attr(&b, QState::Mixed(rho_b))?;
    let mut ev = check_equal_value(&xt, &h, &b_attr)?;
    ev.conclusion = "V(G_X'([b_y]_X')) = 0".into();
    steps.push(ev);

    // Additivity across the two registers.
    let rho_a = joint.reduce(&[0])?;
    let a_attr = state_attr(&a, QState::Mixed(rho_a))?;
    let g_a = make_game(&x, &a_attr)?;
    let g_b = make_game(&xt, &b_attr)?;
    let composite = compose_games(&g_a, &g_b)?;
    let g_s = make_game(composite.observable(), &Attribute::pure(&composite.attribute().substrate().clone(), s.clone())?)?;
    let v_s = game_value(&g_s)?;
    let v_a = game_value(&g_a)?;
    let v_b = game_value(&g_b)?;
    let g_y = qubit_game(&a, &x, &y_amps)?;
    let v_y = game_value(&g_y)?;
    steps.push(DerivationStep::new(
        Rule::Additivity,
        vec!["V(G_X'([b_y]_X')) = 0".into(), "[a_y]_X has the partition of y".into()],
        "V(G_{X_a+X'_b}(s)) = V(G_X([a_y]_X)) + V(G_X'([b_y]_X')) = V(G_X(y))".into(),
        close(v_s, v_a + v_b) && close(v_a, v_y) && close(v_b, 0.0),
        format!("values: s {v_s}, a {v_a}, b {v_b}, y {v_y}"),
    ));

    // Equal-weight expansion over the n branches of |s>.
    let amp = 1.0 / (nt as f64).sqrt();
    let mut uniform = true;
    let mut branch_sum = BigRational::zero();
    for k in 0..nt {
        let xi = if k < g1 { 0 } else { 1 };
        let a_k = s.vector()[xi * nt + k];
        uniform &= (a_k - linalg::c(amp, 0.0)).norm() <= CHECK_TOL;
        branch_sum += if k < g1 { x1 } else { x2 } + &ts[k];
    }
    let support = s.vector().iter().filter(|a| a.norm() > CHECK_TOL).count();
    let symmetric_value = branch_sum / BigRational::from_integer(BigInt::from(nt));
    steps.push(DerivationStep::new(
        Rule::SymmetricBase,
        vec![format!("|s> is an equal-weight superposition of {nt} branches")],
        format!("V(G_{{X_a+X'_b}}(s)) = (1/{nt}) sum_k (x_k + t_k) = {}", r(&symmetric_value)),
        uniform && support == nt && symmetric_value == expected && close(v_s, rational_to_f64(&expected)),
        format!("uniform amplitudes: {uniform}, support {support}, branch average {}", r(&symmetric_value)),
    ));

    let exact = game_value_exact(&g_y)?;
    steps.push(DerivationStep::new(
        Rule::NonSymmetric,
        vec!["additivity".into(), "equal-weight expansion".into()],
        format!("V(G_X(y)) = ({m}*{} + {}*{})/{n} = {}", r(x1), n - m, r(x2), r(&expected)),
        close(v_y, rational_to_f64(&expected)) && exact.as_ref() == Some(&expected),
        format!("direct value {v_y}"),
    ));
    Ok(DerivationTrace { steps, final_value: expected, target_preparation_available: Some(prepared) })
}

/// Equal-weight case: `V(G_X(y+)) = (x1 + x2)/2`.
fn symmetric_base(a: &Arc<SubstrateSpec>, x: &Variable, x1: &BigRational, x2: &BigRational) -> Result<Vec<DerivationStep>> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let labels = x.labels();
    let mut steps = Vec::new();
    let y_plus = qubit_game(a, x, &[s, s])?;
    let y_minus = qubit_game(a, x, &[s, -s])?;
    let v = game_value(&y_plus)?;
    let half = (x1 + x2) / BigRational::from_integer(2.into());

    // Swap symmetry fixes the partition.
    let swap_pi = LabelPermutation::transposition(&labels, &labels[0], &labels[1])?;
    let swap = observable_permutation_unitary(x, &swap_pi)?;
    let yp = PureState::from_real(&[s, s])?;
    let invariant = yp.apply(&swap)?.same_ray(&yp);
    let p = super::game::game_partition(&y_plus)?;
    let halves = p.snapped().is_some_and(|f| f.iter().all(|w| *w == ratio(1, 2)));
    steps.push(DerivationStep::new(
        Rule::Substitutability,
        vec!["S_{x1,x2}(y+) = y+".into()],
        "f(y+) = [1/2, 1/2]".into(),
        invariant && halves,
        format!("swap invariance: {invariant}; partition {:?}", p.values()),
    ));

    // Shift by k = -(x1 + x2), realized by an adder with a payoff register sharp at k.
    let k = -(x1 + x2);
    let reg = SubstrateSpec::quantum("p", 2)?;
    let xp = payoff_observable(&reg, &[k.clone(), &k + BigRational::from_integer(1.into())])?;
    let adder = AdderSpec::new(x, &xp, AdderRealization::Coarse)?;
    let gain = adder.value(&y_plus.state(), &QState::Pure(PureState::basis(2, 0)), &k)?;
    let shifted = game_value(&transform_game(&y_plus, &Transform::Shift(k.clone()))?)?;
    let kf = rational_to_f64(&k);
    steps.push(DerivationStep::new(
        Rule::ShiftRule,
        vec![format!("adder on (y+, {})", r(&k))],
        format!("V(G_X(T_{}(y+))) = V(G_X(y+)) + {}", r(&k), r(&k)),
        close(gain + kf, shifted) && close(shifted, v + kf),
        format!("adder output {}, shifted game {shifted}", gain + kf),
    ));

    // T_k = R o S on {x1, x2}.
    let composed_ok = labels.iter().zip([x1, x2]).all(|(l, xv)| {
        let sx = swap_pi.apply(l).ok().and_then(|t| t.as_rational().ok().cloned());
        sx.is_some_and(|sx| xv + &k == -sx)
    });
    let rs = transform_game(&transform_game(&y_plus, &Transform::Permute(swap_pi.clone()))?, &Transform::Reflect)?;
    let v_rs = game_value(&rs)?;
    steps.push(DerivationStep::new(
        Rule::MeasurementNeutrality,
        vec![format!("x + {} = -S_{{x1,x2}}(x) for x in {{x1, x2}}", r(&k))],
        format!("V(G_X(T_{}(y+))) = V(G_X(R(S_{{x1,x2}}(y+))))", r(&k)),
        composed_ok && close(v_rs, shifted),
        format!("label identity: {composed_ok}; R S game {v_rs}"),
    ));

    // Reflection rule through the two-register state q.
    let b = SubstrateSpec::quantum("b", 2)?;
    let xb = payoff_observable(&b, &[x1.clone(), x2.clone()])?;
    let bell = PureState::from_real(&[s, 0.0, 0.0, s])?.regroup(vec![2, 2])?;
    let yy = |sign: f64| -> Result<PureState> {
        let v = PureState::from_real(&[s, sign * s])?;
        Ok(v.tensor(&v))
    };
    let (ypp, ymm) = (yy(1.0)?, yy(-1.0)?);
    let rhs = PureState::superpose(&[&ypp, &ymm], &[linalg::c(s, 0.0), linalg::c(s, 0.0)])?;
    let residual = (bell.vector() - rhs.vector()).norm();
    let rx = transform_game(&y_plus, &Transform::Reflect)?;
    let bell_game = compose_games(&rx, &make_game(&xb, &pure_attr(&b, &linalg::basis_vector(2, 0))?)?)?;
    let q_game = make_game(bell_game.observable(), &Attribute::pure(bell_game.attribute().substrate(), bell.clone())?)?;
    let v_q = game_value(&q_game)?;
    let xb_plus = make_game(&xb, &pure_attr(&b, PureState::from_real(&[s, s])?.vector())?)?;
    let xb_minus = make_game(&xb, &pure_attr(&b, PureState::from_real(&[s, -s])?.vector())?)?;
    let rx_minus = transform_game(&y_minus, &Transform::Reflect)?;
    let v_pp = game_value(&compose_games(&rx, &xb_plus)?)?;
    let v_mm = game_value(&compose_games(&rx_minus, &xb_minus)?)?;
    let v_rx = game_value(&rx)?;
    steps.push(DerivationStep::new(
        Rule::ReflectionRule,
        vec![
            "(|x1x1> + |x2x2>)/sqrt2 = (|y+y+> + |y-y->)/sqrt2".into(),
            "V(G_{R(X)_a+X_b}(y+,y+)) = V(G_{R(X)_a+X_b}(y-,y-))".into(),
        ],
        "V(G_{R(X)}(y+)) = -V(G_X(y+))".into(),
        residual <= CHECK_TOL && close(v_q, 0.0) && close(v_pp, v_mm) && close(v_rx, -v),
        format!("state identity residual {residual:.3e}; V(q) {v_q}; equal-value pair {v_pp}, {v_mm}"),
    ));

    steps.push(DerivationStep::new(
        Rule::SymmetricBase,
        vec![format!("V(G_X(y+)) - ({}) = -V(G_X(y+))", r(&(x1 + x2)))],
        format!("V(G_X(y+)) = ({} + {})/2 = {}", r(x1), r(x2), r(&half)),
        close(v, rational_to_f64(&half)) && (&half * BigRational::from_integer(2.into()) - (x1 + x2)).abs().is_zero(),
        format!("direct value {v}"),
    ));
    Ok(steps)
}

/// Derivation for a game whose partition snaps to `[m/n, (n−m)/n]` over two payoffs.
pub fn derive_game_value(g: &Game) -> Result<DerivationTrace> {
    let p = super::game::game_partition(g)?;
    let fs = p.snapped().ok_or_else(|| CtError::Unsupported("weights are not rational".into()))?;
    let payoffs = g.payoffs();
    let support: Vec<usize> = (0..fs.len()).filter(|&i| !fs[i].is_zero()).collect();
    match support.as_slice() {
        [i] => {
            let other = payoffs.iter().find(|v| *v != &payoffs[*i]).cloned().unwrap_or_else(|| payoffs[*i].clone());
            derive_value(0, 1, &other, &payoffs[*i])
        }
        [i, j] => {
            let f = &fs[*i];
            let n = f.denom().to_u64_digits().1.first().copied().unwrap_or(1);
            let m = f.numer().to_u64_digits().1.first().copied().unwrap_or(0);
            derive_value(m, n, &payoffs[*i], &payoffs[*j])
        }
        _ => Err(CtError::Unsupported("derivations cover games with at most two payoffs".into())),
    }
}
