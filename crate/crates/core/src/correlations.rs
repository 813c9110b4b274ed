//! Two-party, two-input, two-output behaviors `p(ab|xy)`: construction from
//! states and measurements, no-signalling and locality tests, CHSH values,
//! PR-box detection and the brute-force CHSH maximum of a joint system.
//!
//! CHSH variants are indexed by the position of the minus sign (one of the
//! four input pairs) and an overall sign. Relabelling an input or an output
//! permutes these eight expressions, so their maximum is relabelling
//! invariant.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};
use crate::system::{nontrivial_effects, Measurement, SystemSpec};
use crate::tensor::JointSystem;
use crate::vector::Vector;

/// `table[x][y][a][b] = p(ab|xy)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Behavior {
    table: [[[[Scalar; 2]; 2]; 2]; 2],
}

impl Behavior {
    /// Builds a behavior from `p(a, b, x, y)`, checking range and normalization.
    pub fn from_fn(mut p: impl FnMut(usize, usize, usize, usize) -> Scalar) -> Result<Self> {
        let table = std::array::from_fn(|x| {
            std::array::from_fn(|y| std::array::from_fn(|a| std::array::from_fn(|b| p(a, b, x, y))))
        });
        let b = Behavior { table };
        b.validate()?;
        Ok(b)
    }

    fn validate(&self) -> Result<()> {
        let one = Scalar::one();
        for x in 0..2 {
            for y in 0..2 {
                let mut total = Scalar::zero();
                for a in 0..2 {
                    for b in 0..2 {
                        let v = self.p(a, b, x, y);
                        if v.is_negative() || *v > one {
                            return Err(Error::Invalid(format!(
                                "p({a}{b}|{x}{y}) = {} outside [0, 1]",
                                scalar::display(v)
                            )));
                        }
                        total += v;
                    }
                }
                if total != one {
                    return Err(Error::Invalid(format!(
                        "row {x}{y} sums to {}",
                        scalar::display(&total)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn p(&self, a: usize, b: usize, x: usize, y: usize) -> &Scalar {
        &self.table[x][y][a][b]
    }

    /// PR box with `a ⊕ b = xy ⊕ alpha·x ⊕ beta·y ⊕ gamma`.
    pub fn pr_box(label: PrLabel) -> Self {
        Behavior::from_fn(|a, b, x, y| {
            if (a ^ b) as u8 == label.parity(x, y) {
                scalar::half()
            } else {
                Scalar::zero()
            }
        })
        .expect("PR boxes are normalized")
    }

    pub fn uniform() -> Self {
        Behavior::from_fn(|_, _, _, _| scalar::frac(1, 4)).expect("uniform is normalized")
    }

    /// Local deterministic behavior `a = alice[x]`, `b = bob[y]`.
    pub fn deterministic(alice: [usize; 2], bob: [usize; 2]) -> Self {
        Behavior::from_fn(|a, b, x, y| {
            if a == alice[x] && b == bob[y] {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        })
        .expect("deterministic tables are normalized")
    }

    /// `weight * self + (1 - weight) * other`.
    pub fn mix(&self, other: &Behavior, weight: &Scalar) -> Result<Behavior> {
        let rest = Scalar::one() - weight;
        Behavior::from_fn(|a, b, x, y| weight * self.p(a, b, x, y) + &rest * other.p(a, b, x, y))
    }

    /// Flips Alice's outcome for input `x`.
    pub fn flip_alice_outcome(&self, x_flip: usize) -> Behavior {
        Behavior::from_fn(|a, b, x, y| {
            let a = if x == x_flip { 1 - a } else { a };
            self.p(a, b, x, y).clone()
        })
        .expect("relabelling preserves normalization")
    }

    /// Swaps Bob's two inputs.
    pub fn swap_bob_inputs(&self) -> Behavior {
        Behavior::from_fn(|a, b, x, y| self.p(a, b, x, 1 - y).clone()).expect("relabelling preserves normalization")
    }

    /// Correlator `C_xy = sum_ab (-1)^(a⊕b) p(ab|xy)`.
    pub fn correlator(&self, x: usize, y: usize) -> Scalar {
        self.p(0, 0, x, y) + self.p(1, 1, x, y) - self.p(0, 1, x, y) - self.p(1, 0, x, y)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Serialize, Deserialize)]
struct BehaviorDoc {
    p: BTreeMap<String, [[String; 2]; 2]>,
}

impl Serialize for Behavior {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut p = BTreeMap::new();
        for x in 0..2 {
            for y in 0..2 {
                let rows = std::array::from_fn(|a| std::array::from_fn(|b| scalar::format(self.p(a, b, x, y))));
                p.insert(format!("{x}{y}"), rows);
            }
        }
        BehaviorDoc { p }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Behavior {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = BehaviorDoc::deserialize(d)?;
        let mut parsed = BTreeMap::new();
        for (key, rows) in &doc.p {
            let mut cells: [[Scalar; 2]; 2] = Default::default();
            for a in 0..2 {
                for b in 0..2 {
                    cells[a][b] = scalar::parse(&rows[a][b]).map_err(D::Error::custom)?;
                }
            }
            parsed.insert(key.clone(), cells);
        }
        for key in ["00", "01", "10", "11"] {
            if !parsed.contains_key(key) {
                return Err(D::Error::custom(format!("missing setting {key}")));
            }
        }
        Behavior::from_fn(|a, b, x, y| parsed[&format!("{x}{y}")][a][b].clone()).map_err(D::Error::custom)
    }
}

impl fmt::Display for Behavior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "xy | p(00) p(01) p(10) p(11)")?;
        for x in 0..2 {
            for y in 0..2 {
                write!(f, "{x}{y} |")?;
                for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                    write!(f, " {}", scalar::display(self.p(a, b, x, y)))?;
                }
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// `p(ab|xy) = (f_{a|x} ⊗ g_{b|y})(state)` for binary measurements.
pub fn behavior_from(state: &Vector, meas_a: &[Measurement; 2], meas_b: &[Measurement; 2]) -> Result<Behavior> {
    for m in meas_a.iter().chain(meas_b) {
        if m.outcomes.len() != 2 {
            return Err(Error::Invalid("measurements must be binary".into()));
        }
    }
    let da = meas_a[0].outcomes[0].functional.dim();
    let db = meas_b[0].outcomes[0].functional.dim();
    if state.dim() != da * db {
        return Err(Error::DimensionMismatch {
            expected: da * db,
            got: state.dim(),
        });
    }
    Behavior::from_fn(|a, b, x, y| {
        let f = &meas_a[x].outcomes[a].functional;
        let g = &meas_b[y].outcomes[b].functional;
        f.kron(g).dot(state)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Party {
    Alice,
    Bob,
}

/// Marginal that depends on the other party's input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignallingWitness {
    pub party: Party,
    /// Own input and outcome.
    pub input: usize,
    pub outcome: usize,
    /// Marginal for the other party's input 0 and 1.
    pub marginals: [Scalar; 2],
}

/// `None` when both no-signalling conditions hold exactly.
pub fn check_no_signalling(b: &Behavior) -> Option<SignallingWitness> {
    for x in 0..2 {
        for a in 0..2 {
            let m: [Scalar; 2] = std::array::from_fn(|y| b.p(a, 0, x, y) + b.p(a, 1, x, y));
            if m[0] != m[1] {
                return Some(SignallingWitness {
                    party: Party::Alice,
                    input: x,
                    outcome: a,
                    marginals: m,
                });
            }
        }
    }
    for y in 0..2 {
        for bb in 0..2 {
            let m: [Scalar; 2] = std::array::from_fn(|x| b.p(0, bb, x, y) + b.p(1, bb, x, y));
            if m[0] != m[1] {
                return Some(SignallingWitness {
                    party: Party::Bob,
                    input: y,
                    outcome: bb,
                    marginals: m,
                });
            }
        }
    }
    None
}

pub fn is_no_signalling(b: &Behavior) -> bool {
    check_no_signalling(b).is_none()
}

/// One of the eight CHSH expressions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ChshVariant {
    /// Input pair `(x, y)` carrying the minus sign.
    pub minus: (usize, usize),
    /// Overall sign, `true` for negated.
    pub negated: bool,
}

impl ChshVariant {
    pub fn all() -> [ChshVariant; 8] {
        let mut out = [ChshVariant {
            minus: (1, 1),
            negated: false,
        }; 8];
        let mut k = 0;
        for negated in [false, true] {
            for minus in [(1, 1), (1, 0), (0, 1), (0, 0)] {
                out[k] = ChshVariant { minus, negated };
                k += 1;
            }
        }
        out
    }

    fn weight(&self, x: usize, y: usize) -> i64 {
        let s = if (x, y) == self.minus { -1 } else { 1 };
        if self.negated {
            -s
        } else {
            s
        }
    }

    /// Value of this expression given the four correlators `c[x][y]`.
    pub fn evaluate(&self, c: &[[Scalar; 2]; 2]) -> Scalar {
        let mut v = Scalar::zero();
        for (x, row) in c.iter().enumerate() {
            for (y, cxy) in row.iter().enumerate() {
                if self.weight(x, y) > 0 {
                    v += cxy;
                } else {
                    v -= cxy;
                }
            }
        }
        v
    }
}

impl fmt::Display for ChshVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.negated { "-" } else { "+" };
        write!(f, "{sign}(minus at C{}{})", self.minus.0, self.minus.1)
    }
}

/// Argmax of a CHSH search: joint state and the effects defining the
/// measurements `{e, u - e}` for each input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChshWitness {
    pub state_index: usize,
    pub state: Vector,
    pub effects_a: [Vector; 2],
    pub effects_b: [Vector; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChshResult {
    pub value: Scalar,
    pub variant: ChshVariant,
    pub witness: Option<ChshWitness>,
}

/// Largest of the eight CHSH expressions; the first variant in
/// [`ChshVariant::all`] order wins ties.
pub fn chsh_value(b: &Behavior) -> ChshResult {
    let c: [[Scalar; 2]; 2] = std::array::from_fn(|x| std::array::from_fn(|y| b.correlator(x, y)));
    let mut best: Option<(Scalar, ChshVariant)> = None;
    for v in ChshVariant::all() {
        let value = v.evaluate(&c);
        if best.as_ref().is_none_or(|(bv, _)| value > *bv) {
            best = Some((value, v));
        }
    }
    let (value, variant) = best.expect("eight variants");
    ChshResult {
        value,
        variant,
        witness: None,
    }
}

/// Locality of a no-signalling behavior via the eight CHSH inequalities.
pub fn is_local(b: &Behavior) -> Result<bool> {
    if !is_no_signalling(b) {
        return Err(Error::Signalling);
    }
    Ok(chsh_value(b).value <= scalar::int(2))
}

/// Relabelling of the standard PR box: `a ⊕ b = xy ⊕ alpha·x ⊕ beta·y ⊕ gamma`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrLabel {
    pub alpha: u8,
    pub beta: u8,
    pub gamma: u8,
}

impl PrLabel {
    pub const IDENTITY: PrLabel = PrLabel {
        alpha: 0,
        beta: 0,
        gamma: 0,
    };

    pub fn all() -> impl Iterator<Item = PrLabel> {
        (0..8u8).map(|k| PrLabel {
            alpha: k >> 2 & 1,
            beta: k >> 1 & 1,
            gamma: k & 1,
        })
    }

    fn parity(&self, x: usize, y: usize) -> u8 {
        let (x, y) = (x as u8, y as u8);
        (x & y) ^ (self.alpha & x) ^ (self.beta & y) ^ self.gamma
    }
}

/// Which of the eight PR boxes `b` is, if any.
pub fn is_pr_box(b: &Behavior) -> Option<PrLabel> {
    PrLabel::all().find(|&l| Behavior::pr_box(l) == *b)
}

/// Closed-form maximal CHSH value of the transition family.
///
/// At `x = 0` the value is 2 for every `y`; this also covers `|y| = 1`,
/// where numerator and denominator both vanish.
pub fn chsh_formula(x: &Scalar, y: &Scalar) -> Scalar {
    let two = scalar::int(2);
    if x.is_zero() {
        return two;
    }
    let ay = y.abs();
    let one = Scalar::one();
    let shifted = &ay - &one;
    let denom = x * x + &shifted * &shifted + &two * x * (scalar::int(3) + &ay);
    two + scalar::int(16) * x * x / denom
}

/// Binary-measurement correlator vectors `2e - u` for each nontrivial
/// extremal effect.
fn correlator_functionals(system: &SystemSpec) -> Result<(Vec<Vector>, Vec<Vector>)> {
    let effects: Vec<Vector> = nontrivial_effects(system)?.into_iter().map(|e| e.functional).collect();
    let two = scalar::int(2);
    let corr = effects.iter().map(|e| &e.scale(&two) - &system.unit).collect();
    Ok((effects, corr))
}

struct StateBest {
    value: Scalar,
    variant: ChshVariant,
    choice: [usize; 4],
}

fn best_for_state(state: &Vector, corr_a: &[Vector], corr_b: &[Vector], db: usize) -> Option<StateBest> {
    // table[i][j] = (F_i ⊗ G_j)(state)
    let partial: Vec<Vector> = corr_a
        .iter()
        .map(|f| {
            (0..db)
                .map(|j| {
                    f.iter()
                        .enumerate()
                        .fold(Scalar::zero(), |acc, (i, fi)| acc + fi * &state[i * db + j])
                })
                .collect()
        })
        .collect();
    let table: Vec<Vec<Scalar>> = partial
        .iter()
        .map(|p| corr_b.iter().map(|g| p.dot(g)).collect())
        .collect();
    // With the minus sign on (x1, y1) the expression splits as
    // (T[x0][y0] + T[x1][y0]) + (T[x0][y1] - T[x1][y1]), so for fixed Alice
    // settings the two Bob settings are maximized independently. The other
    // minus positions are the same expressions with inputs swapped.
    let na = corr_a.len();
    let mut best: Option<StateBest> = None;
    for x0 in 0..na {
        for x1 in 0..na {
            let sums: Vec<Scalar> = table[x0].iter().zip(&table[x1]).map(|(p, q)| p + q).collect();
            let diffs: Vec<Scalar> = table[x0].iter().zip(&table[x1]).map(|(p, q)| p - q).collect();
            for negated in [false, true] {
                let pick = |v: &[Scalar]| -> (usize, Scalar) {
                    let mut arg = 0;
                    let mut top: Option<Scalar> = None;
                    for (j, x) in v.iter().enumerate() {
                        let x = if negated { -x.clone() } else { x.clone() };
                        if top.as_ref().is_none_or(|t| x > *t) {
                            top = Some(x);
                            arg = j;
                        }
                    }
                    (arg, top.expect("at least one effect"))
                };
                let (y0, s0) = pick(&sums);
                let (y1, s1) = pick(&diffs);
                let value = s0 + s1;
                if best.as_ref().is_none_or(|b| value > b.value) {
                    best = Some(StateBest {
                        value,
                        variant: ChshVariant { minus: (1, 1), negated },
                        choice: [x0, x1, y0, y1],
                    });
                }
            }
        }
    }
    best
}

/// Exact CHSH maximum over all extremal joint states and all pairs of binary
/// measurements `{e, u - e}` per party, `e` ranging over the extremal effects
/// other than `0` and `u`. Ties go to the earliest state in canonical order,
/// then the earliest measurement choice.
pub fn max_chsh(joint: &JointSystem) -> Result<ChshResult> {
    let (effects_a, corr_a) = correlator_functionals(&joint.party_a)?;
    let (effects_b, corr_b) = correlator_functionals(&joint.party_b)?;
    let db = joint.party_b.dim;
    let per_state: Vec<Option<StateBest>> = joint
        .joint_states
        .par_iter()
        .map(|s| best_for_state(s, &corr_a, &corr_b, db))
        .collect();
    let mut best: Option<(usize, StateBest)> = None;
    for (i, sb) in per_state.into_iter().enumerate() {
        let Some(sb) = sb else { continue };
        if best.as_ref().is_none_or(|(_, b)| sb.value > b.value) {
            best = Some((i, sb));
        }
    }
    let Some((index, sb)) = best else {
        // no nontrivial measurements: every behavior is deterministic and local
        return Ok(ChshResult {
            value: scalar::int(2),
            variant: ChshVariant::all()[0],
            witness: None,
        });
    };
    let [x0, x1, y0, y1] = sb.choice;
    Ok(ChshResult {
        value: sb.value,
        variant: sb.variant,
        witness: Some(ChshWitness {
            state_index: index,
            state: joint.joint_states[index].clone(),
            effects_a: [effects_a[x0].clone(), effects_a[x1].clone()],
            effects_b: [effects_b[y0].clone(), effects_b[y1].clone()],
        }),
    })
}

/// Rebuilds the behavior realizing a CHSH witness.
pub fn witness_behavior(joint: &JointSystem, w: &ChshWitness) -> Result<Behavior> {
    let meas = |system: &SystemSpec, e: &Vector| -> Result<Measurement> {
        Measurement::binary(system, crate::system::Effect::new(system, e.clone())?)
    };
    let ma = [
        meas(&joint.party_a, &w.effects_a[0])?,
        meas(&joint.party_a, &w.effects_a[1])?,
    ];
    let mb = [
        meas(&joint.party_b, &w.effects_b[0])?,
        meas(&joint.party_b, &w.effects_b[1])?,
    ];
    behavior_from(&w.state, &ma, &mb)
}
