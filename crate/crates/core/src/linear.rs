//! Exact feasibility of rational-coefficient linear inequalities whose
//! unknowns and constants live in a lexicographic power Λ = ℚᵏ.
//!
//! A constraint is Σⱼ cⱼ·xⱼ ≥ b (or > b when strict) with cⱼ ∈ ℚ and b ∈ Λ.
//! Fourier–Motzkin elimination stays inside this setting: eliminating a
//! variable pairs every lower bound with every upper bound and produces
//! constraints of the same shape, and the final variable-free residue is
//! decided by exact lexicographic comparison. Because Λ is divisible and
//! densely ordered, the elimination equivalence also holds for strict
//! inequalities, and a satisfying point can be recovered by back
//! substitution (max of lower bounds, min of upper bounds, midpoints when
//! both sides are present).
//!
//! No linear programming over non-archimedean modules is available off the
//! shelf; at the handful of variables a root system rank provides, the
//! quadratic growth of elimination is irrelevant.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::ordered::GroupValue;

/// Σⱼ coeffs[j]·xⱼ ≥ rhs, or > rhs when `strict`.
#[derive(Debug, Clone)]
pub struct LinearConstraint {
    pub coeffs: Vec<BigRational>,
    pub rhs: GroupValue,
    pub strict: bool,
}

impl LinearConstraint {
    pub fn new(coeffs: Vec<BigRational>, rhs: GroupValue) -> Self {
        LinearConstraint {
            coeffs,
            rhs,
            strict: false,
        }
    }

    pub fn strict(coeffs: Vec<BigRational>, rhs: GroupValue) -> Self {
        LinearConstraint {
            coeffs,
            rhs,
            strict: true,
        }
    }

    /// The negation ¬(Σc·x ≥ b) = Σ(−c)·x > −b, and vice versa.
    pub fn negated(&self) -> Self {
        LinearConstraint {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            rhs: -&self.rhs,
            strict: !self.strict,
        }
    }

    fn evaluate(&self, point: &[GroupValue], rank: usize) -> GroupValue {
        let mut acc = GroupValue::zero(rank);
        for (c, x) in self.coeffs.iter().zip(point.iter()) {
            if !c.is_zero() {
                acc = &acc + &x.scale(c);
            }
        }
        acc
    }

    pub fn satisfied_by(&self, point: &[GroupValue], rank: usize) -> bool {
        let value = self.evaluate(point, rank);
        if self.strict {
            value > self.rhs
        } else {
            value >= self.rhs
        }
    }
}

/// Decides feasibility of a system in `nvars` Λ-valued unknowns of rank
/// `rank`; returns a satisfying assignment when one exists.
pub fn feasible_point(
    constraints: &[LinearConstraint],
    nvars: usize,
    rank: usize,
) -> Option<Vec<GroupValue>> {
    // Elimination from the last variable down; remember the bounds each
    // variable had at its elimination step for back substitution.
    let mut system: Vec<LinearConstraint> = constraints.to_vec();
    let mut stages: Vec<(Vec<LinearConstraint>, Vec<LinearConstraint>)> = Vec::new();

    for var in (0..nvars).rev() {
        let mut lowers = Vec::new(); // coeff at var > 0
        let mut uppers = Vec::new(); // coeff at var < 0
        let mut rest = Vec::new();
        for c in system {
            let coeff = &c.coeffs[var];
            if coeff.is_positive() {
                lowers.push(c);
            } else if coeff.is_negative() {
                uppers.push(c);
            } else {
                rest.push(c);
            }
        }
        for lo in &lowers {
            for up in &uppers {
                // lo: cl·x_v + l·x ≥ bl (cl > 0) ; up: cu·x_v + u·x ≥ bu (cu < 0)
                // combined: (cl·u − cu·l)·x ≥ cl·bu − cu·bl
                let cl = lo.coeffs[var].clone();
                let cu = up.coeffs[var].clone();
                let coeffs: Vec<BigRational> = (0..nvars)
                    .map(|j| {
                        if j == var {
                            BigRational::zero()
                        } else {
                            &cl * &up.coeffs[j] - &cu * &lo.coeffs[j]
                        }
                    })
                    .collect();
                let rhs = &up.rhs.scale(&cl) - &lo.rhs.scale(&cu);
                rest.push(LinearConstraint {
                    coeffs,
                    rhs,
                    strict: lo.strict || up.strict,
                });
            }
        }
        stages.push((lowers, uppers));
        system = rest;
    }

    // variable-free residue: 0 ≥ rhs (or 0 > rhs)
    let zero = GroupValue::zero(rank);
    for c in &system {
        let ok = if c.strict { zero > c.rhs } else { zero >= c.rhs };
        if !ok {
            return None;
        }
    }

    // back substitution, variable 0 first (eliminated last)
    let mut point = vec![GroupValue::zero(rank); nvars];
    for var in 0..nvars {
        let (lowers, uppers) = &stages[nvars - 1 - var];
        let mut best_lo: Option<(GroupValue, bool)> = None;
        for lo in lowers {
            let mut bound = lo.rhs.clone();
            for (j, c) in lo.coeffs.iter().enumerate() {
                if j != var && !c.is_zero() {
                    bound = &bound - &point[j].scale(c);
                }
            }
            let bound = bound.scale(&lo.coeffs[var].recip());
            match &best_lo {
                Some((b, s)) if bound < *b || (bound == *b && (*s || !lo.strict)) => {}
                _ => best_lo = Some((bound, lo.strict)),
            }
        }
        let mut best_up: Option<(GroupValue, bool)> = None;
        for up in uppers {
            let mut bound = up.rhs.clone();
            for (j, c) in up.coeffs.iter().enumerate() {
                if j != var && !c.is_zero() {
                    bound = &bound - &point[j].scale(c);
                }
            }
            let bound = bound.scale(&up.coeffs[var].recip());
            match &best_up {
                Some((b, s)) if bound > *b || (bound == *b && (*s || !up.strict)) => {}
                _ => best_up = Some((bound, up.strict)),
            }
        }
        point[var] = match (best_lo, best_up) {
            (None, None) => GroupValue::zero(rank),
            (Some((lo, strict)), None) => {
                if strict {
                    &lo + &unit(rank)
                } else {
                    lo
                }
            }
            (None, Some((up, strict))) => {
                if strict {
                    &up - &unit(rank)
                } else {
                    up
                }
            }
            (Some((lo, ls)), Some((up, us))) => {
                debug_assert!(lo <= up, "elimination certified feasibility");
                if lo == up {
                    debug_assert!(!ls && !us, "tight bounds cannot be strict when feasible");
                    lo
                } else {
                    (&lo + &up).scale(&half())
                }
            }
        };
    }

    debug_assert!(
        constraints.iter().all(|c| c.satisfied_by(&point, rank)),
        "back substitution yields a satisfying point"
    );
    Some(point)
}

fn unit(rank: usize) -> GroupValue {
    let mut coords = vec![BigRational::zero(); rank];
    if rank > 0 {
        coords[0] = BigRational::one();
    }
    GroupValue::new(coords)
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}
