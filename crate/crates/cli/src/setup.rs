//! Turning command-line selections into systems, tensor products and labels.

use anyhow::{anyhow, bail, Result};
use boxworld_core::scalar::{self, int};
use boxworld_core::system::{make_modified_square, make_square, nontrivial_effects, SystemSpec};
use boxworld_core::tensor::{custom_from_max, max_tensor, min_tensor, JointSystem};
use boxworld_core::{boxworld, Scalar, Vector};
use clap::{Args, ValueEnum};

pub const DEFAULT_KEEP: [usize; 4] = boxworld::KEPT_ENTANGLED;

pub fn parse_scalar(text: &str) -> Result<Scalar, String> {
    scalar::parse(text).map_err(|e| e.to_string())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SystemKind {
    /// Standard boxworld square
    Square,
    /// Square with its first corner moved to (x, y)
    Modified,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum TensorChoice {
    Max,
    Min,
    Custom,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SelfdualTarget {
    Square,
    Modified,
    Max,
    Min,
    Custom,
}

#[derive(Args, Debug, Clone)]
pub struct ParamArgs {
    /// Transition parameter x in [0, 1], e.g. 1/2
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub x: Option<Scalar>,

    /// Transition parameter y with |y| <= 1 - x, e.g. -1/4
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub y: Option<Scalar>,
}

#[derive(Args, Debug, Clone)]
pub struct SystemArgs {
    /// Local system; giving --x or --y selects the modified square
    #[arg(long, value_enum)]
    pub system: Option<SystemKind>,

    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Args, Debug, Clone)]
pub struct KeepArgs {
    /// Vertex labels of the maximal product kept by the custom product
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_KEEP)]
    pub keep: Vec<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct TensorArgs {
    #[command(flatten)]
    pub system: SystemArgs,

    /// Which tensor product to build
    #[arg(long, value_enum, default_value_t = TensorChoice::Max)]
    pub tensor: TensorChoice,

    #[command(flatten)]
    pub keep: KeepArgs,
}

impl ParamArgs {
    fn given(&self) -> bool {
        self.x.is_some() || self.y.is_some()
    }

    pub fn modified(&self) -> Result<SystemSpec> {
        let x = self.x.clone().ok_or_else(|| anyhow!("the modified square needs --x"))?;
        let y = self.y.clone().unwrap_or_else(|| int(0));
        Ok(make_modified_square(x, y)?)
    }
}

impl SystemArgs {
    pub fn build(&self) -> Result<SystemSpec> {
        match (self.system, self.params.given()) {
            (Some(SystemKind::Square), true) => bail!("--x and --y only apply to the modified square"),
            (Some(SystemKind::Square), false) | (None, false) => Ok(make_square()),
            (Some(SystemKind::Modified), _) | (None, true) => self.params.modified(),
        }
    }
}

/// Transition parameters of a square-family system; the square itself sits at
/// `(1, 0)`.
pub fn transition_params(system: &SystemSpec) -> (Scalar, Scalar) {
    match &system.params {
        Some(p) => (p.x.clone(), p.y.clone()),
        None => (int(1), int(0)),
    }
}

/// Labels for the vertices of a maximal tensor product.
///
/// The square uses its standard numbering. For other systems the product
/// `a ⊗ b` of local states `a, b` (1-based) gets `n (a - 1) + b` and the
/// remaining vertices follow in canonical order.
pub struct Labels {
    entries: Vec<(usize, Vector)>,
}

impl Labels {
    pub fn new(max: &JointSystem) -> Self {
        let a = &max.party_a;
        let b = &max.party_b;
        let square = make_square();
        if *a == square && *b == square {
            let entries = max
                .joint_states
                .iter()
                .map(|v| (boxworld::label_of(v).expect("square vertices are labelled"), v.clone()))
                .collect();
            return Labels { entries };
        }
        let mut entries = Vec::new();
        let nb = b.states.len();
        for (i, sa) in a.states.iter().enumerate() {
            for (j, sb) in b.states.iter().enumerate() {
                entries.push((nb * i + j + 1, sa.kron(sb)));
            }
        }
        let first = entries.len() + 1;
        for (k, v) in max.entangled_states().into_iter().enumerate() {
            entries.push((first + k, v));
        }
        Labels { entries }
    }

    pub fn label(&self, v: &Vector) -> Option<usize> {
        self.entries.iter().find(|(_, w)| w == v).map(|(l, _)| *l)
    }

    pub fn name(&self, v: &Vector) -> String {
        self.label(v).map_or_else(|| "mixed/other".into(), |l| format!("w{l}"))
    }

    pub fn vertex(&self, label: usize) -> Result<Vector> {
        self.entries
            .iter()
            .find(|(l, _)| *l == label)
            .map(|(_, v)| v.clone())
            .ok_or_else(|| anyhow!("no vertex labelled {label}"))
    }
}

/// Everything a command needs about one bipartite setting.
pub struct Setup {
    pub local: SystemSpec,
    pub max: JointSystem,
    pub joint: JointSystem,
    pub labels: Labels,
}

pub fn build(system: &SystemArgs, tensor: TensorChoice, keep: &[usize]) -> Result<Setup> {
    let local = system.build()?;
    let max = max_tensor(&local, &local)?;
    let labels = Labels::new(&max);
    let joint = match tensor {
        TensorChoice::Max => max.clone(),
        TensorChoice::Min => min_tensor(&local, &local)?,
        TensorChoice::Custom => {
            let kept = keep.iter().map(|&l| labels.vertex(l)).collect::<Result<Vec<_>>>()?;
            custom_from_max(&max, &kept)?
        }
    };
    Ok(Setup {
        local,
        max,
        joint,
        labels,
    })
}

impl TensorArgs {
    pub fn build(&self) -> Result<Setup> {
        build(&self.system, self.tensor, &self.keep.keep)
    }
}

/// Local effect number `index` (1-based): the square's `e_1..e_4`, otherwise
/// the nontrivial extremal effects in canonical order.
pub fn local_effect(system: &SystemSpec, index: usize) -> Result<Vector> {
    if system.params.is_none() && *system == make_square() {
        if (1..=4).contains(&index) {
            return Ok(boxworld::effect(index));
        }
        bail!("square effects are numbered 1 to 4, got {index}");
    }
    let effects = nontrivial_effects(system)?;
    effects
        .get(index.wrapping_sub(1))
        .map(|e| e.functional.clone())
        .ok_or_else(|| anyhow!("effects are numbered 1 to {}, got {index}", effects.len()))
}

/// Normalized entangled effects of a joint system with labels.
///
/// On the square they are matched against the standard `e_17..e_20`;
/// otherwise they are numbered after the kept vertex labels.
pub struct EntangledEffect {
    pub label: String,
    pub ray: Vector,
    pub factor: Scalar,
    pub normalized: Vector,
    pub reference_prefactor: Option<Scalar>,
}

pub fn entangled_effects(setup: &Setup) -> Result<Vec<EntangledEffect>> {
    let rays = setup.joint.entangled_effect_rays()?;
    let square = setup.local == make_square();
    let mut out = Vec::new();
    for (k, ray) in rays.into_iter().enumerate() {
        let (factor, normalized) = setup.joint.normalize_effect(&ray)?;
        let reference = if square {
            (17..=20).find(|&l| boxworld::entangled_effect(l) == normalized)
        } else {
            None
        };
        let label = match reference {
            Some(l) => format!("e{l}"),
            None => format!("f{}", k + 1),
        };
        out.push(EntangledEffect {
            label,
            ray,
            factor,
            normalized,
            reference_prefactor: reference.map(boxworld::entangled_effect_prefactor),
        });
    }
    out.sort_by_key(|e| {
        (
            e.label[..1].to_string(),
            e.label[1..].parse::<usize>().unwrap_or(usize::MAX),
        )
    });
    Ok(out)
}
