//! The adder `(x, p, 0) -> (x, p, x + p)`: a measurer of `X + X_p` on the
//! game substrate and a payoff register.

use num_rational::BigRational;

use crate::error::{CtError, Result};
use crate::kernel::{coarsen_variable, Coarsening, Variable};
use crate::label::Label;
use crate::linalg;
use crate::quantum::{build_measurer, Branch, Labeling, MeasurerSpec};
use crate::state::QState;

/// How the adder unitary is put together.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdderRealization {
    /// Measurer of the coarsened observable `X + X_p`, one branch per sum.
    Coarse,
    /// One branch per basis vector of every `(x, p)` pair, target order reversed.
    Fine,
}

#[derive(Debug, Clone)]
pub struct AdderSpec {
    sums: Vec<BigRational>,
    measurer: MeasurerSpec,
    realization: AdderRealization,
}

impl AdderSpec {
    pub fn new(x: &Variable, payoffs: &Variable, realization: AdderRealization) -> Result<Self> {
        let sum = coarsen_variable(x, payoffs, Coarsening::Sum)?;
        let sums = sum.numeric_labels()?;
        let n = sums.len();
        let measurer = match realization {
            AdderRealization::Coarse => build_measurer(&sum, &Labeling::standard(n, n.max(2))?)?,
            AdderRealization::Fine => {
                let dt = n.max(2);
                let slot = |v: &BigRational| dt - 1 - sums.iter().position(|s| s == v).expect("sum present");
                let xs = x.numeric_labels()?;
                let ps = payoffs.numeric_labels()?;
                let mut branches = Vec::new();
                for (i, (_, a)) in x.members().iter().enumerate() {
                    for (j, (_, b)) in payoffs.members().iter().enumerate() {
                        let v = &xs[i] + &ps[j];
                        let target = linalg::basis_vector(dt, slot(&v));
                        for u in a.span_basis()? {
                            for w in b.span_basis()? {
                                branches.push(Branch {
                                    label: Label::Num(v.clone()),
                                    source: linalg::kron_vec(&u, &w),
                                    target: target.clone(),
                                });
                            }
                        }
                    }
                }
                let declared = sums.iter().map(|v| (Label::Num(v.clone()), linalg::basis_vector(dt, slot(v)))).collect();
                let dims = sum.substrate().atom_sizes();
                MeasurerSpec::from_branches(dims, dt, branches, linalg::basis_vector(dt, dt - 1), declared)?
            }
        };
        Ok(AdderSpec { sums, measurer, realization })
    }

    pub fn realization(&self) -> AdderRealization {
        self.realization
    }

    pub fn sums(&self) -> &[BigRational] {
        &self.sums
    }

    pub fn measurer(&self) -> &MeasurerSpec {
        &self.measurer
    }

    /// Weight of each output payoff after playing `z` with the register in `p`.
    pub fn play(&self, z: &QState, p: &QState) -> Result<Vec<(Label, f64)>> {
        let joint = self.measurer.measure(&z.tensor(p))?;
        Ok(self.measurer.outcome_weights(&joint))
    }

    /// Sharp output payoff, if any.
    pub fn sharp_payoff(&self, z: &QState, p: &QState) -> Result<Option<Label>> {
        let joint = self.measurer.measure(&z.tensor(p))?;
        Ok(self.measurer.sharp_outcome(&joint))
    }

    /// Expected gain `Σ_s w_s s − p` for a register sharp at `p`.
    pub fn value(&self, z: &QState, p: &QState, p_value: &BigRational) -> Result<f64> {
        let w = self.play(z, p)?;
        let total: f64 = w.iter().map(|(l, f)| f * l.as_f64().expect("numeric")).sum();
        let weight: f64 = w.iter().map(|(_, f)| f).sum();
        if (weight - 1.0).abs() > 1e-9 {
            return Err(CtError::Domain(format!("output payoff weights sum to {weight}")));
        }
        Ok(total - crate::label::rational_to_f64(p_value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision::game::payoff_observable;
    use crate::kernel::SubstrateSpec;
    use crate::state::PureState;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn sharp_inputs_add() {
        let a = SubstrateSpec::quantum("a", 2).unwrap();
        let p = SubstrateSpec::quantum("p", 3).unwrap();
        let x = payoff_observable(&a, &[q(0), q(1)]).unwrap();
        let xp = payoff_observable(&p, &[q(0), q(1), q(5)]).unwrap();
        for r in [AdderRealization::Coarse, AdderRealization::Fine] {
            let adder = AdderSpec::new(&x, &xp, r).unwrap();
            let z = QState::Pure(PureState::basis(2, 1));
            let reg = QState::Pure(PureState::basis(3, 2));
            assert_eq!(adder.sharp_payoff(&z, &reg).unwrap(), Some(Label::int(6)));
        }
    }

    #[test]
    fn realizations_agree_on_value() {
        let a = SubstrateSpec::quantum("a", 2).unwrap();
        let p = SubstrateSpec::quantum("p", 2).unwrap();
        let x = payoff_observable(&a, &[q(10), q(-2)]).unwrap();
        let xp = payoff_observable(&p, &[q(0), q(3)]).unwrap();
        let z = QState::Pure(PureState::from_real(&[(1.0f64 / 3.0).sqrt(), (2.0f64 / 3.0).sqrt()]).unwrap());
        let reg = QState::Pure(PureState::basis(2, 1));
        let coarse = AdderSpec::new(&x, &xp, AdderRealization::Coarse).unwrap();
        let fine = AdderSpec::new(&x, &xp, AdderRealization::Fine).unwrap();
        assert!((coarse.measurer().unitary() - fine.measurer().unitary()).camax() > 1e-3);
        let v1 = coarse.value(&z, &reg, &q(3)).unwrap();
        let v2 = fine.value(&z, &reg, &q(3)).unwrap();
        assert!((v1 - 2.0).abs() < 1e-12 && (v2 - 2.0).abs() < 1e-12, "{v1} {v2}");
    }
}
