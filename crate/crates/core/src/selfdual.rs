//! Weak self-duality: search for an invertible linear map taking the state
//! cone onto its dual.
//!
//! The search matches extreme rays of the cone with extreme rays of the dual
//! along isomorphisms of their adjacency graphs, then solves
//! `T r_i = s_i d_{p(i)}` for the map `T` and positive scales `s_i`.

use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::geometry::{self, Cone};
use crate::linalg::{self, Matrix};
use crate::scalar::Scalar;
use crate::vector::Vector;

#[derive(Clone, Debug, PartialEq)]
pub struct DualityCertificate {
    /// Maps unnormalized states to unnormalized effects. Entries are coprime
    /// integers.
    pub map: Matrix,
    /// `pairing[i]` is the dual ray that state ray `i` is sent to.
    pub pairing: Vec<usize>,
    /// `map * state_rays[i] = scales[i] * effect_rays[pairing[i]]`.
    pub scales: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SelfDualityOutcome {
    Certified,
    /// The cone and its dual have different numbers of extreme rays, so no
    /// linear bijection exists.
    RayCountMismatch {
        state_rays: usize,
        effect_rays: usize,
    },
    /// Every adjacency-preserving pairing was tried without finding a map.
    NotFound,
}

#[derive(Clone, Debug)]
pub struct SelfDualityReport {
    pub state_rays: Vec<Vector>,
    pub effect_rays: Vec<Vector>,
    pub outcome: SelfDualityOutcome,
    /// Certificates in search order, at most the requested limit.
    pub certificates: Vec<DualityCertificate>,
    /// Number of complete adjacency-preserving pairings examined.
    pub pairings_tried: usize,
}

impl SelfDualityReport {
    pub fn certificate(&self) -> Option<&DualityCertificate> {
        self.certificates.first()
    }
}

/// Pairs `(i, j)` of rays spanning a two-dimensional face.
fn adjacency(rays: &[Vector], facets: &[Vector], dim: usize) -> Vec<Vec<bool>> {
    let n = rays.len();
    let zero: Vec<Vec<bool>> = rays
        .iter()
        .map(|r| facets.iter().map(|f| f.dot(r).is_zero()).collect())
        .collect();
    let mut adj = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let common: Vec<Vector> = facets
                .iter()
                .enumerate()
                .filter(|(k, _)| zero[i][*k] && zero[j][*k])
                .map(|(_, f)| f.clone())
                .collect();
            let a = dim >= 2 && linalg::rank_of(&common) == dim - 2;
            adj[i][j] = a;
            adj[j][i] = a;
        }
    }
    adj
}

/// Solves for a map sending each state ray to a positive multiple of its
/// paired dual ray.
fn solve_map(rays: &[Vector], duals: &[Vector], pairing: &[usize]) -> Option<DualityCertificate> {
    let d = rays[0].dim();
    let n = rays.len();
    let unknowns = d * d + n;
    let mut m = Matrix::zeros(n * d, unknowns);
    for (i, r) in rays.iter().enumerate() {
        let target = &duals[pairing[i]];
        for a in 0..d {
            let row = i * d + a;
            for b in 0..d {
                m[(row, a * d + b)] = r[b].clone();
            }
            m[(row, d * d + i)] = -target[a].clone();
        }
    }
    let null = m.nullspace();
    let solution = match null.len() {
        0 => return None,
        1 => {
            let v = null.into_iter().next().expect("one vector");
            let s = &v[d * d];
            if s.is_negative() {
                -v
            } else {
                v
            }
        }
        _ => {
            // Several independent solutions: try unit scales.
            let mut rows: Vec<Vector> = (0..n * d).map(|i| m.row(i)).collect();
            let mut rhs = vec![Scalar::zero(); n * d];
            for i in 0..n {
                rows.push(Vector::basis(unknowns, d * d + i));
                rhs.push(crate::scalar::int(1));
            }
            Matrix::from_rows(&rows).solve(&Vector::new(rhs))?
        }
    };
    let scales: Vec<Scalar> = solution[d * d..].to_vec();
    if !scales.iter().all(Signed::is_positive) {
        return None;
    }
    let entries = Vector::new(solution[..d * d].to_vec());
    let factor = entries.canonical_ray().ratio_to(&entries)?;
    let mut map = Matrix::zeros(d, d);
    for a in 0..d {
        for b in 0..d {
            map[(a, b)] = &entries[a * d + b] * &factor;
        }
    }
    map.inverse()?;
    let scales = scales.iter().map(|s| s * &factor).collect();
    Some(DualityCertificate {
        map,
        pairing: pairing.to_vec(),
        scales,
    })
}

struct Search<'a> {
    rays: &'a [Vector],
    duals: &'a [Vector],
    adj: Vec<Vec<bool>>,
    dual_adj: Vec<Vec<bool>>,
    limit: usize,
    found: Vec<DualityCertificate>,
    tried: usize,
}

impl Search<'_> {
    fn degree(adj: &[Vec<bool>], i: usize) -> usize {
        adj[i].iter().filter(|&&a| a).count()
    }

    fn run(&mut self, pairing: &mut Vec<usize>, used: &mut Vec<bool>) {
        if self.found.len() >= self.limit {
            return;
        }
        let i = pairing.len();
        if i == self.rays.len() {
            self.tried += 1;
            if let Some(c) = solve_map(self.rays, self.duals, pairing) {
                self.found.push(c);
            }
            return;
        }
        let deg = Self::degree(&self.adj, i);
        for j in 0..self.duals.len() {
            if used[j] || Self::degree(&self.dual_adj, j) != deg {
                continue;
            }
            let consistent = pairing
                .iter()
                .enumerate()
                .all(|(k, &pk)| self.adj[i][k] == self.dual_adj[j][pk]);
            if !consistent {
                continue;
            }
            used[j] = true;
            pairing.push(j);
            self.run(pairing, used);
            pairing.pop();
            used[j] = false;
            if self.found.len() >= self.limit {
                return;
            }
        }
    }
}

/// Searches for up to `limit` weak self-duality certificates of a pointed,
/// full-dimensional cone.
pub fn check_weak_self_duality(cone: &Cone, limit: usize) -> Result<SelfDualityReport> {
    let primal = cone.clone().extreme();
    let dual = geometry::dual_cone_rays(&primal)?;
    let state_rays = primal.rays.clone();
    let effect_rays = dual.rays.clone();
    if state_rays.len() != effect_rays.len() {
        return Ok(SelfDualityReport {
            outcome: SelfDualityOutcome::RayCountMismatch {
                state_rays: state_rays.len(),
                effect_rays: effect_rays.len(),
            },
            state_rays,
            effect_rays,
            certificates: Vec::new(),
            pairings_tried: 0,
        });
    }
    let dim = cone.dim;
    let mut search = Search {
        rays: &state_rays,
        duals: &effect_rays,
        adj: adjacency(&state_rays, &effect_rays, dim),
        dual_adj: adjacency(&effect_rays, &state_rays, dim),
        limit: limit.max(1),
        found: Vec::new(),
        tried: 0,
    };
    search.run(&mut Vec::new(), &mut vec![false; effect_rays.len()]);
    let outcome = if search.found.is_empty() {
        SelfDualityOutcome::NotFound
    } else {
        SelfDualityOutcome::Certified
    };
    let (certificates, pairings_tried) = (search.found, search.tried);
    Ok(SelfDualityReport {
        state_rays,
        effect_rays,
        outcome,
        certificates,
        pairings_tried,
    })
}

/// Exact check that `cert.map` is invertible and sends each state ray to a
/// positive multiple of a distinct dual ray, covering all of them.
pub fn verify_certificate(cert: &DualityCertificate, state_rays: &[Vector], effect_rays: &[Vector]) -> bool {
    if state_rays.len() != effect_rays.len() || cert.map.inverse().is_none() {
        return false;
    }
    let mut hit = vec![false; effect_rays.len()];
    for r in state_rays {
        let image = cert.map.mul_vec(r);
        match effect_rays.iter().position(|d| image.is_positive_multiple_of(d)) {
            Some(j) if !hit[j] => hit[j] = true,
            _ => return false,
        }
    }
    true
}

/// For a 3x3 map that acts on the first two coordinates as a positive multiple
/// of a rotation by `k * pi / 4` and scales the third coordinate positively,
/// returns `k` in `0..8`.
pub fn z_rotation_eighths(map: &Matrix) -> Option<u8> {
    if map.rows != 3 || map.cols != 3 {
        return None;
    }
    let off_axis = [(0, 2), (1, 2), (2, 0), (2, 1)];
    if off_axis.iter().any(|&ij| !map[ij].is_zero()) || !map[(2, 2)].is_positive() {
        return None;
    }
    let (c, s) = (&map[(0, 0)], &map[(1, 0)]);
    if map[(1, 1)] != *c || map[(0, 1)] != -s.clone() || (c.is_zero() && s.is_zero()) {
        return None;
    }
    let k = match (c.signum(), s.signum()) {
        _ if c.is_zero() => {
            if s.is_positive() {
                2
            } else {
                6
            }
        }
        _ if s.is_zero() => {
            if c.is_positive() {
                0
            } else {
                4
            }
        }
        _ if c.abs() != s.abs() => return None,
        (cs, ss) => match (cs.is_positive(), ss.is_positive()) {
            (true, true) => 1,
            (false, true) => 3,
            (false, false) => 5,
            (true, false) => 7,
        },
    };
    Some(k)
}
