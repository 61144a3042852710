//! Subcommand bodies. Each prints its findings to `out` and returns the
//! verdicts that decide the exit code.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed};
use thiserror::Error;

use superinfo_core::decision::game::{game_value_exact, make_game};
use superinfo_core::ensembles::{verify_convergence, Probabilities};
use superinfo_core::label::{rational_to_f64, render_rational};
use superinfo_core::predicates::{
    detect_superinformation, is_computation_variable, is_distinguishable, is_information_observable,
    is_information_variable, is_observable, restricted_variable,
};
use superinfo_core::unpredictability::{predictor_feasible, replay_network, PredictorProblem, PredictorStatus};
use superinfo_core::{
    check_decision_support, derive_value, game_value, is_task_possible, unpredictability_certificate,
    validate_variable, Attribute, CtError, Label, PureState, Status, SubstrateSpec, Variable,
};

use crate::amplitude::{parse_amplitude_list, parse_rational_list};
use crate::report::Verdict;
use crate::spec::{ModelSpecDocument, SpecError};

pub const CSV_HEADER: &str = "N,epsilon,deviant_weight_exact,deviant_weight_float";

#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Spec(#[from] SpecError),

    #[error("{0}")]
    Input(String),

    #[error(transparent)]
    Core(#[from] CtError),

    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
}

type Outcome = Result<Vec<Verdict>, CommandError>;

fn verdict(name: impl Into<String>, pass: bool) -> Verdict {
    Verdict { name: name.into(), pass }
}

fn yes(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

/// Predicate sweep over every variable and task, then superinformation.
pub fn check_model(doc: &ModelSpecDocument, out: &mut impl Write) -> Outcome {
    let mut found: BTreeMap<String, bool> = BTreeMap::new();
    let mut verdicts = Vec::new();
    writeln!(out, "model: {} on {} states", doc.model.kind(), doc.substrate.size())?;
    for (name, v) in &doc.variables {
        let comp = is_computation_variable(v, &doc.model)?.verdict;
        let info = is_information_variable(v, &doc.model)?.verdict;
        let dist = is_distinguishable(v, &doc.model)?.verdict;
        let obs = is_observable(v)?.verdict;
        let info_obs = is_information_observable(v, &doc.model)?.verdict;
        writeln!(
            out,
            "variable {name}: computation={} information={} distinguishable={} observable={} information_observable={}",
            yes(comp),
            yes(info),
            yes(dist),
            yes(obs),
            yes(info_obs)
        )?;
        for (key, value) in [
            ("computation", comp),
            ("information", info),
            ("distinguishable", dist),
            ("observable", obs),
            ("information_observable", info_obs),
        ] {
            found.insert(format!("{name}.{key}"), value);
        }
    }
    for (name, t) in &doc.tasks {
        let v = is_task_possible(t, &doc.model)?;
        writeln!(out, "task {name}: {}", v.reason())?;
        verdicts.push(verdict(format!("task {name} decided"), v.status != Status::Unknown));
        found.insert(format!("task.{name}"), v.status == Status::Possible);
    }
    let pairs: Vec<(&str, &str)> = match &doc.superinformation {
        Some([a, b]) => vec![(a.as_str(), b.as_str())],
        None => {
            let names: Vec<&str> = doc.variables.iter().map(|(n, _)| n.as_str()).collect();
            let mut p = Vec::new();
            for i in 0..names.len() {
                for j in i + 1..names.len() {
                    p.push((names[i], names[j]));
                }
            }
            p
        }
    };
    let mut any = false;
    for (a, b) in pairs {
        let x = doc.variable(a).expect("validated reference");
        let y = doc.variable(b).expect("validated reference");
        let r = detect_superinformation(x, y, &doc.model)?;
        writeln!(out, "pair {a},{b}: superinformation={}", yes(r.verdict))?;
        any |= r.verdict;
    }
    writeln!(out, "superinformation: {}", yes(any))?;
    found.insert("superinformation".into(), any);
    for (key, want) in &doc.expect {
        let got = *found
            .get(key)
            .ok_or_else(|| CommandError::Input(format!("expectation `{key}` names no computed verdict")))?;
        if got != *want {
            writeln!(out, "expectation {key}={want} failed: got {got}")?;
        }
        verdicts.push(verdict(format!("expect {key}"), got == *want));
    }
    Ok(verdicts)
}

/// The attribute named `name`, or the single named state.
fn lookup_attribute(doc: &ModelSpecDocument, name: &str) -> Result<Attribute, CommandError> {
    if let Some(a) = doc.attribute(name) {
        return Ok(a.clone());
    }
    match doc.state(name) {
        Some(s) => Ok(Attribute::pure(&doc.substrate, s.clone())?.with_name(name)),
        None => Err(CommandError::Input(format!("no attribute or state named `{name}`"))),
    }
}

fn lookup_variable<'a>(doc: &'a ModelSpecDocument, name: &str) -> Result<&'a Variable, CommandError> {
    doc.variable(name).ok_or_else(|| CommandError::Input(format!("no variable named `{name}`")))
}

/// Cloning and predictor analysis for `Z = X_y ∪ {y}`.
pub fn predict(doc: &ModelSpecDocument, observable: &str, state: &str, out: &mut impl Write) -> Outcome {
    let x = lookup_variable(doc, observable)?;
    let y = lookup_attribute(doc, state)?;
    match unpredictability_certificate(x, &y, &doc.model) {
        Ok(r) => {
            let members: Vec<String> = r.z.labels().iter().map(|l| l.to_string()).collect();
            writeln!(out, "Z: {{{}}}", members.join(", "))?;
            for (receptive, v) in &r.cloning {
                writeln!(out, "cloning from {receptive}: {}", v.reason())?;
            }
            writeln!(out, "cloning: {}", r.cloning_status)?;
            let pred = match r.predictor.status {
                PredictorStatus::Exists => "exists".to_string(),
                PredictorStatus::Impossible => "impossible".to_string(),
            };
            writeln!(out, "predictor: {pred}")?;
            if let Some(c) = &r.predictor.certificate {
                writeln!(out, "certificate: {}", c.describe())?;
            }
            writeln!(out, "unpredictable: {}", yes(r.both_impossible()))?;
            Ok(vec![
                verdict("cloning decided", r.cloning_status != Status::Unknown),
                verdict(
                    "cloning and predictor agree",
                    (r.cloning_status == Status::Impossible) == (r.predictor.status == PredictorStatus::Impossible),
                ),
            ])
        }
        Err(CtError::Degenerate(msg)) => {
            // y is sharp in X: a predictor exists and its network must replay.
            let z = restricted_variable(x, &y)?;
            let problem = PredictorProblem::new(x.clone(), z)?;
            let v = predictor_feasible(&problem)?;
            let replay = replay_network(&problem, &v)?;
            writeln!(out, "{msg}")?;
            writeln!(out, "predictor: {}", if v.status == PredictorStatus::Exists { "exists" } else { "impossible" })?;
            writeln!(out, "replayed network sharp-yes: {}", yes(replay))?;
            writeln!(out, "unpredictable: false")?;
            Ok(vec![verdict("predictor replay", replay)])
        }
        Err(e) => Err(e.into()),
    }
}

pub struct ConvergeArgs<'a> {
    pub amplitudes: &'a str,
    pub n_sweep: &'a [usize],
    pub epsilon: &'a str,
    pub bound: Option<f64>,
    pub csv: Option<&'a Path>,
}

pub fn converge(args: &ConvergeArgs, out: &mut impl Write) -> Outcome {
    let amps = parse_amplitude_list(args.amplitudes).map_err(CommandError::Input)?;
    let probs = Probabilities::from_amplitudes(&amps).map_err(|e| CommandError::Input(e.to_string()))?;
    let eps = superinfo_core::label::parse_rational(args.epsilon).map_err(|e| CommandError::Input(e.to_string()))?;
    if !eps.is_positive() {
        return Err(CommandError::Input("epsilon must be positive".into()));
    }
    if args.n_sweep.is_empty() || args.n_sweep.contains(&0) {
        return Err(CommandError::Input("N-sweep needs positive N values".into()));
    }
    let report = verify_convergence(&probs, args.n_sweep, &eps, args.bound.unwrap_or(f64::INFINITY))?;
    let mut text = String::new();
    text.push_str(CSV_HEADER);
    text.push('\n');
    for row in &report.rows {
        text.push_str(&row.csv());
        text.push('\n');
    }
    out.write_all(text.as_bytes())?;
    if let Some(path) = args.csv {
        std::fs::write(path, &text)?;
    }
    let mut verdicts = vec![verdict("normalised", report.sums_to_one), verdict("non-increasing", report.monotone)];
    if args.bound.is_some() {
        verdicts.push(verdict("final below bound", report.final_below_bound));
    }
    Ok(verdicts)
}

/// Payoff observable with equal payoffs merged into one span member.
fn grouped_observable(payoffs: &[BigRational]) -> Result<Variable, CommandError> {
    let d = payoffs.len().max(2);
    let sub = SubstrateSpec::quantum("g", d)?;
    let mut distinct: Vec<BigRational> = Vec::new();
    for p in payoffs {
        if !distinct.contains(p) {
            distinct.push(p.clone());
        }
    }
    let mut members = Vec::new();
    for (k, p) in distinct.iter().enumerate() {
        let mut basis: Vec<_> = payoffs
            .iter()
            .enumerate()
            .filter(|(_, q)| *q == p)
            .map(|(i, _)| superinfo_core::linalg::basis_vector(d, i))
            .collect();
        // A lone payoff on a padded qubit owns the spare basis state too.
        if payoffs.len() == 1 && k == 0 {
            basis.push(superinfo_core::linalg::basis_vector(d, 1));
        }
        members.push((Label::Num(p.clone()), Attribute::subspace(&sub, basis)?));
    }
    Ok(validate_variable(members)?)
}

/// Value of the game whose attribute has partition `weights` over `payoffs`.
pub fn value(weights: &str, payoffs: &str, out: &mut impl Write) -> Outcome {
    let w = parse_rational_list(weights).map_err(|e| CommandError::Input(format!("weights: {e}")))?;
    let x = parse_rational_list(payoffs).map_err(|e| CommandError::Input(format!("payoffs: {e}")))?;
    if w.len() != x.len() {
        return Err(CommandError::Input(format!("{} weights for {} payoffs", w.len(), x.len())));
    }
    if w.iter().any(|v| v.is_negative()) || !w.iter().sum::<BigRational>().is_one() {
        return Err(CommandError::Input("weights must be non-negative and sum to exactly 1".into()));
    }
    let obs = grouped_observable(&x)?;
    let d = obs.substrate().size();
    let mut amps = vec![Complex64::new(0.0, 0.0); d];
    for (k, f) in w.iter().enumerate() {
        amps[k] = Complex64::new(rational_to_f64(f).sqrt(), 0.0);
    }
    let z = Attribute::pure(obs.substrate(), PureState::new(amps)?)?;
    let game = make_game(&obs, &z)?;
    let direct: BigRational = w.iter().zip(&x).map(|(f, p)| f * p).sum();
    let backend = game_value(&game)?;
    let shown = game_value_exact(&game)?.unwrap_or_else(|| direct.clone());
    writeln!(out, "{}", render_rational(&shown))?;
    let agree = (backend - rational_to_f64(&direct)).abs() <= 1e-9 && shown == direct;
    Ok(vec![verdict("game value matches weighted payoffs", agree)])
}

pub fn derive(m: u64, n: u64, payoffs: &str, out: &mut impl Write) -> Outcome {
    let x = parse_rational_list(payoffs).map_err(|e| CommandError::Input(format!("payoffs: {e}")))?;
    let [x1, x2] = x.as_slice() else {
        return Err(CommandError::Input(format!("derive takes two payoffs, got {}", x.len())));
    };
    let trace = derive_value(m, n, x1, x2).map_err(|e| match e {
        CtError::Domain(_) | CtError::Size(_) => CommandError::Input(e.to_string()),
        other => CommandError::Core(other),
    })?;
    out.write_all(trace.render().as_bytes())?;
    writeln!(out, "value: {}", render_rational(&trace.final_value))?;
    let mm = BigRational::new(m.into(), n.into());
    let direct = &mm * x1 + (BigRational::one() - &mm) * x2;
    Ok(vec![
        verdict("every step checks", trace.all_pass()),
        verdict("value equals weighted payoffs", trace.final_value == direct),
    ])
}

pub fn decision_support(doc: &ModelSpecDocument, pair: Option<[String; 2]>, out: &mut impl Write) -> Outcome {
    let [a, b] = match pair.or_else(|| doc.decision_support.clone()) {
        Some(p) => p,
        None if doc.variables.len() >= 2 => [doc.variables[0].0.clone(), doc.variables[1].0.clone()],
        None => return Err(CommandError::Input("decision-support needs two variables".into())),
    };
    let x = lookup_variable(doc, &a)?;
    let y = lookup_variable(doc, &b)?;
    let r = check_decision_support(&doc.model, x, y)?;
    writeln!(out, "complementary: {}", yes(r.complementary))?;
    for c in &r.conditions {
        writeln!(out, "{}: {} | {}", c.condition, if c.pass { "pass" } else { "fail" }, c.detail)?;
    }
    if let Some(res) = r.doubling_residual {
        writeln!(out, "doubling identity residual: {res:.3e}")?;
    }
    let mut verdicts: Vec<Verdict> = r.conditions.iter().map(|c| verdict(c.condition.clone(), c.pass)).collect();
    verdicts.push(verdict("complementary", r.complementary));
    if let (Some(q), Some(names)) = (doc.joint_state("q"), &r.pair) {
        let x1 = x.attribute(&Label::parse(&names[0])).and_then(|m| m.single_state()).and_then(|s| s.to_pure());
        let x2 = x.attribute(&Label::parse(&names[1])).and_then(|m| m.single_state()).and_then(|s| s.to_pure());
        let matches = match (x1, x2) {
            (Some(x1), Some(x2)) => {
                let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                let target = PureState::superpose(&[&x1.tensor(&x1), &x2.tensor(&x2)], &[h, h])?;
                q.dim() == target.dim() && (q.inner(&target).norm() - 1.0).abs() <= 1e-9
            }
            _ => false,
        };
        writeln!(out, "q is (|x1 x1> + |x2 x2>)/sqrt(2): {}", yes(matches))?;
        verdicts.push(verdict("q", matches));
    }
    writeln!(out, "decision-supporting: {}", yes(r.pass()))?;
    if let Some(reason) = &r.reason {
        writeln!(out, "reason: {reason}")?;
    }
    Ok(verdicts)
}
