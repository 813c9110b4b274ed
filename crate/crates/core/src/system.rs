//! Single-system GPT definitions: state spaces, effects, measurements and the
//! builders for the classical, boxworld and transition systems.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{self, Cone, Halfspace};
use crate::scalar::{self, Scalar};
use crate::vector::{sort_canonical, Vector};

/// Parameters `(x, y)` of the transition family, where the first square
/// corner is replaced by `(x, y, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionParams {
    #[serde(with = "scalar::serde_scalar")]
    pub x: Scalar,
    #[serde(with = "scalar::serde_scalar")]
    pub y: Scalar,
}

impl TransitionParams {
    /// `x` in `[0, 1]` and `y` in `[x - 1, 1 - x]`.
    pub fn new(x: Scalar, y: Scalar) -> Result<Self> {
        let one = Scalar::one();
        if x.is_negative() || x > one {
            return Err(Error::Range(format!("x = {} must lie in [0, 1]", scalar::display(&x))));
        }
        let bound = &one - &x;
        if y.abs() > bound {
            return Err(Error::Range(format!(
                "y = {} must lie in [x - 1, 1 - x] = [{}, {}]",
                scalar::display(&y),
                scalar::display(&-bound.clone()),
                scalar::display(&bound)
            )));
        }
        Ok(TransitionParams { x, y })
    }
}

/// A single system: extremal normalized states and the unit measure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub name: String,
    pub dim: usize,
    pub params: Option<TransitionParams>,
    pub unit: Vector,
    pub states: Vec<Vector>,
}

impl SystemSpec {
    /// Validates normalization and that every listed state is extreme.
    pub fn new(name: impl Into<String>, states: Vec<Vector>, unit: Vector) -> Result<Self> {
        let dim = unit.dim();
        if states.is_empty() {
            return Err(Error::Invalid("a system needs at least one state".into()));
        }
        for s in &states {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: s.dim(),
                });
            }
            if !unit.dot(s).is_one() {
                return Err(Error::Invalid(format!("state {s} is not normalized")));
            }
        }
        let extreme = geometry::extreme_points(&states);
        if extreme.len() != states.len() {
            return Err(Error::Invalid("state list contains non-extreme points".into()));
        }
        Ok(SystemSpec {
            name: name.into(),
            dim,
            params: None,
            unit,
            states,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SystemSpec = serde_json::from_str(text)?;
        let checked = SystemSpec::new(spec.name.clone(), spec.states.clone(), spec.unit.clone())?;
        if checked.dim != spec.dim {
            return Err(Error::DimensionMismatch {
                expected: checked.dim,
                got: spec.dim,
            });
        }
        Ok(spec)
    }

    /// Cone of unnormalized states.
    pub fn state_cone(&self) -> Cone {
        Cone::from_rays(self.dim, self.states.clone()).expect("states share the system dimension")
    }

    /// Cone of unnormalized effects, i.e. the dual of the state cone.
    pub fn effect_cone(&self) -> Result<Cone> {
        geometry::dual_cone_rays(&self.state_cone())
    }

    /// Effect value on every extremal state.
    pub fn evaluate(&self, functional: &Vector) -> Vec<Scalar> {
        self.states.iter().map(|s| functional.dot(s)).collect()
    }
}

fn square_corners() -> [Vector; 4] {
    [
        Vector::from_ints(&[1, 0, 1]),
        Vector::from_ints(&[0, 1, 1]),
        Vector::from_ints(&[-1, 0, 1]),
        Vector::from_ints(&[0, -1, 1]),
    ]
}

/// The boxworld square with corners `(+-1, 0, 1)`, `(0, +-1, 1)`.
pub fn make_square() -> SystemSpec {
    SystemSpec {
        name: "square".into(),
        dim: 3,
        params: None,
        unit: Vector::from_ints(&[0, 0, 1]),
        states: square_corners().to_vec(),
    }
}

/// Square with its first corner moved to `(x, y, 1)`. At `x = 0` the moved
/// corner falls onto the opposite edge and the system is a triangle.
pub fn make_modified_square(x: Scalar, y: Scalar) -> Result<SystemSpec> {
    let params = TransitionParams::new(x, y)?;
    let mut candidates = square_corners().to_vec();
    candidates[0] = Vector::new(vec![params.x.clone(), params.y.clone(), Scalar::one()]);
    let extreme = geometry::extreme_points(&candidates);
    let states: Vec<Vector> = candidates.into_iter().filter(|c| extreme.contains(c)).collect();
    Ok(SystemSpec {
        name: format!(
            "modified-square(x={}, y={})",
            scalar::display(&params.x),
            scalar::display(&params.y)
        ),
        dim: 3,
        params: Some(params),
        unit: Vector::from_ints(&[0, 0, 1]),
        states,
    })
}

/// Classical system with `n` perfectly distinguishable pure states.
pub fn make_simplex(n: usize) -> Result<SystemSpec> {
    if n == 0 {
        return Err(Error::Range("a simplex needs n >= 1".into()));
    }
    Ok(SystemSpec {
        name: format!("simplex({n})"),
        dim: n,
        params: None,
        unit: (0..n).map(|_| Scalar::one()).collect(),
        states: (0..n).map(|i| Vector::basis(n, i)).collect(),
    })
}

/// Effects that identify the pure states of [`make_simplex`]: `e_i(w_j) = delta_ij`.
pub fn simplex_distinguishing_effects(n: usize) -> Vec<Vector> {
    (0..n).map(|i| Vector::basis(n, i)).collect()
}

/// Boxworld system with `k` binary fiducial measurements: the hypercube with
/// corners `(+-1, ..., +-1, 1)`.
pub fn make_hypercube(k: usize) -> Result<SystemSpec> {
    if k == 0 || k > 16 {
        return Err(Error::Range("hypercube needs 1 <= k <= 16".into()));
    }
    let states = (0..1u32 << k)
        .map(|mask| {
            let mut v: Vec<Scalar> = (0..k)
                .map(|i| {
                    if mask >> i & 1 == 1 {
                        scalar::int(-1)
                    } else {
                        Scalar::one()
                    }
                })
                .collect();
            v.push(Scalar::one());
            Vector::new(v)
        })
        .collect();
    Ok(SystemSpec {
        name: format!("hypercube({k})"),
        dim: k + 1,
        params: None,
        unit: Vector::basis(k + 1, k),
        states,
    })
}

/// A functional with `0 <= e(w) <= 1` on every state of its system.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Effect {
    pub functional: Vector,
}

impl Effect {
    pub fn new(system: &SystemSpec, functional: Vector) -> Result<Self> {
        if functional.dim() != system.dim {
            return Err(Error::DimensionMismatch {
                expected: system.dim,
                got: functional.dim(),
            });
        }
        let one = Scalar::one();
        for v in system.evaluate(&functional) {
            if v.is_negative() || v > one {
                return Err(Error::Invalid(format!(
                    "{functional} takes value {} outside [0, 1]",
                    scalar::display(&v)
                )));
            }
        }
        Ok(Effect { functional })
    }

    pub fn apply(&self, state: &Vector) -> Scalar {
        self.functional.dot(state)
    }

    pub fn is_trivial(&self, system: &SystemSpec) -> bool {
        self.functional.is_zero() || self.functional == system.unit
    }
}

/// Effects summing to the unit measure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Measurement {
    pub outcomes: Vec<Effect>,
}

impl Measurement {
    pub fn new(system: &SystemSpec, outcomes: Vec<Effect>) -> Result<Self> {
        let mut total = Vector::zeros(system.dim);
        for e in &outcomes {
            if e.functional.dim() != system.dim {
                return Err(Error::DimensionMismatch {
                    expected: system.dim,
                    got: e.functional.dim(),
                });
            }
            total = &total + &e.functional;
        }
        if total != system.unit {
            return Err(Error::Invalid("measurement outcomes do not sum to the unit".into()));
        }
        Ok(Measurement { outcomes })
    }

    /// `{e, u - e}`.
    pub fn binary(system: &SystemSpec, effect: Effect) -> Result<Self> {
        let complement = Effect::new(system, &system.unit - &effect.functional)?;
        Measurement::new(system, vec![effect, complement])
    }

    pub fn probabilities(&self, state: &Vector) -> Vec<Scalar> {
        self.outcomes.iter().map(|e| e.apply(state)).collect()
    }
}

/// Extreme points of the effect polytope `{f : 0 <= f(w) <= 1}`, including the
/// zero functional and the unit, canonically sorted.
pub fn effect_extremals(system: &SystemSpec) -> Result<Vec<Effect>> {
    let mut constraints = Vec::with_capacity(2 * system.states.len());
    for s in &system.states {
        constraints.push(Halfspace::ge(s.clone(), Scalar::zero()));
        constraints.push(Halfspace::le(s.clone(), Scalar::one()));
    }
    let mut vertices = geometry::enumerate_vertices(&constraints, &[])?;
    sort_canonical(&mut vertices);
    Ok(vertices.into_iter().map(|functional| Effect { functional }).collect())
}

/// Extremal effects other than `0` and `u`; these generate every binary
/// measurement used for correlation searches.
pub fn nontrivial_effects(system: &SystemSpec) -> Result<Vec<Effect>> {
    Ok(effect_extremals(system)?
        .into_iter()
        .filter(|e| !e.is_trivial(system))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, half, int};

    #[test]
    fn square_states_and_unit() {
        let sq = make_square();
        assert_eq!(sq.states[0], Vector::from_ints(&[1, 0, 1]));
        for s in &sq.states {
            assert_eq!(sq.unit.dot(s), int(1));
        }
        let e3 = Vector::from_ints(&[1, 1, 1]).scale(&half());
        assert_eq!(e3.dot(&sq.states[0]), int(1));
    }

    #[test]
    fn modified_square_endpoints() {
        let boxworld = make_modified_square(int(1), int(0)).unwrap();
        assert_eq!(boxworld.states, make_square().states);
        assert_eq!(boxworld.unit, make_square().unit);
        let classical = make_modified_square(int(0), int(0)).unwrap();
        assert_eq!(classical.states.len(), 3);
        let generic = make_modified_square(half(), frac(1, 4)).unwrap();
        assert_eq!(generic.states.len(), 4);
        assert_eq!(generic.states[0], Vector::new(vec![half(), frac(1, 4), int(1)]));
    }

    #[test]
    fn modified_square_rejects_out_of_range() {
        assert!(matches!(make_modified_square(int(2), int(0)), Err(Error::Range(_))));
        assert!(matches!(make_modified_square(int(-1), int(0)), Err(Error::Range(_))));
        assert!(matches!(make_modified_square(half(), frac(3, 4)), Err(Error::Range(_))));
        assert!(make_modified_square(half(), frac(-1, 2)).is_ok());
    }

    #[test]
    fn simplex_distinguishes_states() {
        let bit = make_simplex(2).unwrap();
        let e = simplex_distinguishing_effects(2);
        assert_eq!(e[0].dot(&bit.states[0]), int(1));
        assert_eq!(e[0].dot(&bit.states[1]), int(0));
        assert_eq!(effect_extremals(&bit).unwrap().len(), 4);
        let four = make_simplex(4).unwrap();
        assert_eq!(four.dim, 4);
        assert_eq!(four.states.len(), 4);
        assert!(make_simplex(0).is_err());
    }

    #[test]
    fn square_effects() {
        let sq = make_square();
        let effects: Vec<Vector> = effect_extremals(&sq)
            .unwrap()
            .into_iter()
            .map(|e| e.functional)
            .collect();
        let mut expected = vec![
            Vector::zeros(3),
            sq.unit.clone(),
            Vector::from_ints(&[-1, -1, 1]).scale(&half()),
            Vector::from_ints(&[1, -1, 1]).scale(&half()),
            Vector::from_ints(&[1, 1, 1]).scale(&half()),
            Vector::from_ints(&[-1, 1, 1]).scale(&half()),
        ];
        sort_canonical(&mut expected);
        assert_eq!(effects, expected);
    }

    #[test]
    fn hypercube_counts() {
        let cube = make_hypercube(3).unwrap();
        assert_eq!(cube.states.len(), 8);
        assert_eq!(cube.effect_cone().unwrap().rays.len(), 6);
        let sq = make_hypercube(2).unwrap();
        assert_eq!(effect_extremals(&sq).unwrap().len(), 6);
    }

    #[test]
    fn effects_and_measurements_are_validated() {
        let sq = make_square();
        assert!(Effect::new(&sq, Vector::from_ints(&[1, 0, 0])).is_err());
        let e = Effect::new(&sq, Vector::from_ints(&[1, 1, 1]).scale(&half())).unwrap();
        let m = Measurement::binary(&sq, e).unwrap();
        for s in &sq.states {
            let total: Scalar = m.probabilities(s).iter().sum();
            assert_eq!(total, int(1));
        }
        assert!(Measurement::new(&sq, vec![]).is_err());
    }

    #[test]
    fn json_round_trip_is_exact() {
        let spec = make_modified_square(frac(1, 3), frac(-1, 5)).unwrap();
        let text = spec.to_json().unwrap();
        assert!(text.contains("\"1/3\""));
        let back = SystemSpec::from_json(&text).unwrap();
        assert_eq!(back, spec);
        assert_eq!(back.to_json().unwrap(), text);
    }

    #[test]
    fn rejects_unnormalized_or_redundant_states() {
        let unit = Vector::from_ints(&[0, 0, 1]);
        assert!(SystemSpec::new("bad", vec![Vector::from_ints(&[1, 0, 2])], unit.clone()).is_err());
        let mut states = square_corners().to_vec();
        states.push(Vector::from_ints(&[0, 0, 1]));
        assert!(SystemSpec::new("bad", states, unit).is_err());
    }
}
