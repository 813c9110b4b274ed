//! Bipartite composition of systems: minimal, maximal and restricted tensor
//! products, their effect cones, and separability tests.
//!
//! Joint vectors use A-major flattening: component `(i, j)` sits at
//! `i * dim(B) + j`.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{self, Cone, ConeFacets, Halfspace, Hyperplane, Membership};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::system::SystemSpec;
use crate::vector::{sort_canonical, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Layout {
    #[serde(rename = "A-major")]
    AMajor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TensorKind {
    Minimal,
    Maximal,
    /// Products plus the listed vertices of the maximal tensor product, given
    /// as positions in its canonical vertex list.
    Custom {
        kept: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JointSystem {
    pub party_a: SystemSpec,
    pub party_b: SystemSpec,
    pub kind: TensorKind,
    pub layout: Layout,
    pub unit: Vector,
    /// Extremal joint states, canonically sorted.
    pub joint_states: Vec<Vector>,
    /// Extreme rays of the joint effect cone, coprime integers, sorted.
    pub joint_effect_rays: Vec<Vector>,
    /// Products of local extremal states, canonically sorted.
    pub product_states: Vec<Vector>,
}

pub fn tensor_vectors(a: &Vector, b: &Vector) -> Vector {
    a.kron(b)
}

fn product_states(a: &SystemSpec, b: &SystemSpec) -> Vec<Vector> {
    let mut out: Vec<Vector> = a
        .states
        .iter()
        .flat_map(|sa| b.states.iter().map(move |sb| sa.kron(sb)))
        .collect();
    sort_canonical(&mut out);
    out
}

fn product_effect_rays(a: &SystemSpec, b: &SystemSpec) -> Result<Vec<Vector>> {
    let ea = a.effect_cone()?.rays;
    let eb = b.effect_cone()?.rays;
    let mut out: Vec<Vector> = ea
        .iter()
        .flat_map(|fa| eb.iter().map(move |fb| fa.kron(fb).canonical_ray()))
        .collect();
    sort_canonical(&mut out);
    Ok(out)
}

/// All joint states that are nonnegative on product effects.
pub fn max_tensor(a: &SystemSpec, b: &SystemSpec) -> Result<JointSystem> {
    let effect_rays = product_effect_rays(a, b)?;
    let unit = a.unit.kron(&b.unit);
    let constraints: Vec<Halfspace> = effect_rays
        .iter()
        .map(|f| Halfspace::ge(f.clone(), Scalar::zero()))
        .collect();
    let normalization = [Hyperplane::new(unit.clone(), Scalar::one())];
    let joint_states = geometry::enumerate_vertices(&constraints, &normalization)?;
    Ok(JointSystem {
        party_a: a.clone(),
        party_b: b.clone(),
        kind: TensorKind::Maximal,
        layout: Layout::AMajor,
        unit,
        joint_states,
        joint_effect_rays: effect_rays,
        product_states: product_states(a, b),
    })
}

/// Convex hull of product states.
pub fn min_tensor(a: &SystemSpec, b: &SystemSpec) -> Result<JointSystem> {
    let products = product_states(a, b);
    let cone = Cone::from_rays(a.dim * b.dim, products.clone())?;
    let effects = geometry::dual_cone_rays(&cone)?;
    Ok(JointSystem {
        party_a: a.clone(),
        party_b: b.clone(),
        kind: TensorKind::Minimal,
        layout: Layout::AMajor,
        unit: a.unit.kron(&b.unit),
        joint_states: products.clone(),
        joint_effect_rays: effects.rays,
        product_states: products,
    })
}

/// Products together with the chosen vertices of the maximal tensor product.
///
/// A kept state outside the maximal tensor product is rejected with the
/// violated product effect as a separating certificate.
pub fn custom_tensor(a: &SystemSpec, b: &SystemSpec, kept: &[Vector]) -> Result<JointSystem> {
    let max = max_tensor(a, b)?;
    custom_from_max(&max, kept)
}

/// As [`custom_tensor`], reusing an already computed maximal tensor product.
pub fn custom_from_max(max: &JointSystem, kept: &[Vector]) -> Result<JointSystem> {
    if max.kind != TensorKind::Maximal {
        return Err(Error::Invalid("expected a maximal tensor product".into()));
    }
    let max_cone = max.state_cone();
    let mut positions = Vec::with_capacity(kept.len());
    for s in kept {
        if let Membership::Outside { separator } = geometry::cone_membership(s, &max_cone)? {
            return Err(Error::NotInMaximal { separator });
        }
        let pos = max
            .joint_states
            .iter()
            .position(|v| v == s)
            .ok_or_else(|| Error::Invalid(format!("{s} is not a vertex of the maximal tensor product")))?;
        positions.push(pos);
    }
    positions.sort_unstable();
    positions.dedup();

    let mut states = max.product_states.clone();
    states.extend(positions.iter().map(|&p| max.joint_states[p].clone()));
    sort_canonical(&mut states);
    let cone = Cone::from_rays(max.unit.dim(), states.clone())?;
    let effects = geometry::dual_cone_rays(&cone)?;
    let kind = if positions.is_empty() {
        TensorKind::Minimal
    } else {
        TensorKind::Custom { kept: positions }
    };
    Ok(JointSystem {
        party_a: max.party_a.clone(),
        party_b: max.party_b.clone(),
        kind,
        layout: Layout::AMajor,
        unit: max.unit.clone(),
        joint_states: states,
        joint_effect_rays: effects.rays,
        product_states: max.product_states.clone(),
    })
}

/// Result of [`is_separable`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Separability {
    /// Convex weights over `product_states` (index, weight), summing to one.
    Separable { weights: Vec<(usize, Scalar)> },
    /// A functional nonnegative on all product states but negative on the state.
    Entangled { separator: Vector },
}

impl Separability {
    pub fn is_separable(&self) -> bool {
        matches!(self, Separability::Separable { .. })
    }
}

impl JointSystem {
    pub fn dim(&self) -> usize {
        self.unit.dim()
    }

    /// Cone over the joint states, with the joint effect rays as its facets.
    pub fn state_cone(&self) -> Cone {
        Cone {
            dim: self.dim(),
            rays: self.joint_states.iter().map(Vector::canonical_ray).collect(),
            facets: Some(ConeFacets {
                inequalities: self.joint_effect_rays.clone(),
                equations: Vec::new(),
            }),
        }
    }

    /// Cone generated by the joint effect rays.
    pub fn effect_cone(&self) -> Cone {
        Cone {
            dim: self.dim(),
            rays: self.joint_effect_rays.clone(),
            facets: None,
        }
    }

    /// Cone over product states (the minimal tensor product).
    pub fn product_cone(&self) -> Result<Cone> {
        let cone = Cone::from_rays(self.dim(), self.product_states.clone())?;
        let dual = geometry::dual_cone_rays(&cone)?;
        Ok(Cone {
            facets: Some(ConeFacets {
                inequalities: dual.rays,
                equations: Vec::new(),
            }),
            ..cone
        })
    }

    /// Joint effect rays that are not products of local effect rays.
    pub fn entangled_effect_rays(&self) -> Result<Vec<Vector>> {
        let products = product_effect_rays(&self.party_a, &self.party_b)?;
        Ok(self
            .joint_effect_rays
            .iter()
            .filter(|r| !products.contains(r))
            .cloned()
            .collect())
    }

    /// Joint states that are not products.
    pub fn entangled_states(&self) -> Vec<Vector> {
        self.joint_states
            .iter()
            .filter(|s| !self.product_states.contains(s))
            .cloned()
            .collect()
    }

    /// Scales an effect ray so its largest value on the joint states is one.
    /// Returns the scale factor and the scaled effect.
    pub fn normalize_effect(&self, ray: &Vector) -> Result<(Scalar, Vector)> {
        let max = self
            .joint_states
            .iter()
            .map(|s| ray.dot(s))
            .max()
            .ok_or_else(|| Error::Invalid("joint system without states".into()))?;
        if !max.is_positive() {
            return Err(Error::Invalid(format!("{ray} is not positive on any joint state")));
        }
        let factor = max.recip();
        Ok((factor.clone(), ray.scale(&factor)))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Decides separability with a convex decomposition or a separating functional.
pub fn is_separable(state: &Vector, joint: &JointSystem) -> Result<Separability> {
    if !joint.unit.try_dot(state)?.is_one() {
        return Err(Error::Invalid("state is not normalized".into()));
    }
    let cone = joint.product_cone()?;
    match geometry::cone_membership(state, &cone)? {
        Membership::Outside { separator } => Ok(Separability::Entangled { separator }),
        Membership::Inside { .. } => {
            let facets = cone.facets.expect("product cone carries facets").inequalities;
            let weights = convex_decomposition(state, &joint.product_states, &facets);
            Ok(Separability::Separable { weights })
        }
    }
}

/// Writes a point of `conv(vertices)` as a convex combination by repeatedly
/// stepping away from a vertex of its minimal face until a new facet becomes
/// tight. `facets` are the homogeneous inequalities `f · x >= 0`.
fn convex_decomposition(point: &Vector, vertices: &[Vector], facets: &[Vector]) -> Vec<(usize, Scalar)> {
    let mut weights: Vec<Scalar> = vec![Scalar::zero(); vertices.len()];
    let mut current = point.clone();
    let mut mass = Scalar::one();
    loop {
        if let Some(i) = vertices.iter().position(|v| *v == current) {
            weights[i] += &mass;
            break;
        }
        let tight: Vec<&Vector> = facets.iter().filter(|f| f.dot(&current).is_zero()).collect();
        let (vi, v) = vertices
            .iter()
            .enumerate()
            .find(|(_, v)| tight.iter().all(|f| f.dot(v).is_zero()))
            .expect("a point of the polytope has a vertex on its minimal face");
        let direction = &current - v;
        let step = facets
            .iter()
            .filter_map(|f| {
                let slope = f.dot(&direction);
                slope.is_negative().then(|| f.dot(&current) / -slope)
            })
            .min()
            .expect("bounded polytope limits every direction");
        // current = (next + step * v) / (1 + step)
        let next = &current + &direction.scale(&step);
        let denom = Scalar::one() + &step;
        weights[vi] += &mass * &step / &denom;
        mass /= denom;
        current = next;
    }
    weights.into_iter().enumerate().filter(|(_, w)| !w.is_zero()).collect()
}

/// Affine decomposition over product states with the fewest nonzero terms;
/// among equally short ones, the first support in lexicographic order of
/// `joint.product_states` indices. Coefficients sum to one.
pub fn affine_decomposition(state: &Vector, joint: &JointSystem) -> Result<Vec<(usize, Scalar)>> {
    let products = &joint.product_states;
    if state.dim() != joint.dim() {
        return Err(Error::DimensionMismatch {
            expected: joint.dim(),
            got: state.dim(),
        });
    }
    let all = Matrix::from_columns(products);
    if all.solve(state).is_none() {
        return Err(Error::NotInSpan);
    }
    if state.is_zero() {
        return Ok(Vec::new());
    }
    let n = products.len();
    let rank = all.rank();
    for k in 1..=rank {
        let mut subset: Vec<usize> = (0..k).collect();
        loop {
            let cols: Vec<Vector> = subset.iter().map(|&i| products[i].clone()).collect();
            if let Some(c) = Matrix::from_columns(&cols).solve(state) {
                if c.iter().all(|x| !x.is_zero()) {
                    return Ok(subset.iter().copied().zip(c.into_entries()).collect());
                }
            }
            if !geometry::next_combination(&mut subset, n) {
                break;
            }
        }
    }
    unreachable!("a basic solution exists once the state is in the span")
}

/// Recombines `(index, coefficient)` pairs over `joint.product_states`.
pub fn recombine(terms: &[(usize, Scalar)], joint: &JointSystem) -> Vector {
    let mut acc = Vector::zeros(joint.dim());
    for (i, c) in terms {
        acc = &acc + &joint.product_states[*i].scale(c);
    }
    acc
}
