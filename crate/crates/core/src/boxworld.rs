//! Reference data for the boxworld square: the four corner states, their
//! effects, the eight entangled vertices of the maximal tensor product written
//! as affine combinations of product states, and the four entangled effects of
//! the restricted tensor product.
//!
//! Joint states use 1-based labels 1..=24. Labels 1..=16 are the products
//! `w_a ⊗ w_b` with label `4(a - 1) + b`; labels 17..=24 are the entangled
//! vertices.

use crate::scalar::{self, Scalar};
use crate::vector::{combination, Vector};

/// `(sign, a, b)` standing for `sign * w_a ⊗ w_b`.
type Term = (i64, usize, usize);

/// Entangled joint states 17..=24, each `1/2` times the listed terms.
pub const ENTANGLED_STATE_TERMS: [[Term; 4]; 8] = [
    [(1, 1, 2), (-1, 2, 2), (1, 2, 3), (1, 3, 1)],
    [(1, 2, 2), (-1, 3, 3), (1, 3, 4), (1, 4, 3)],
    [(1, 1, 1), (-1, 2, 2), (1, 2, 3), (1, 3, 2)],
    [(1, 2, 2), (-1, 3, 2), (1, 3, 3), (1, 4, 1)],
    [(1, 1, 4), (-1, 1, 1), (1, 2, 1), (1, 4, 2)],
    [(1, 1, 4), (-1, 1, 1), (1, 2, 2), (1, 4, 1)],
    [(1, 1, 1), (-1, 1, 2), (1, 2, 2), (1, 4, 3)],
    [(1, 1, 1), (-1, 1, 4), (1, 2, 4), (1, 4, 3)],
];

/// Entangled effects 17..=20 of the restricted tensor product as published:
/// prefactor (numerator, denominator) times the listed product-effect terms.
pub const ENTANGLED_EFFECT_TERMS: [((i64, i64), [Term; 4]); 4] = [
    ((2, 3), [(1, 1, 2), (-1, 2, 2), (1, 2, 3), (1, 3, 1)]),
    ((1, 1), [(1, 2, 2), (-1, 3, 3), (1, 3, 4), (1, 4, 3)]),
    ((1, 1), [(1, 1, 1), (-1, 2, 2), (1, 2, 3), (1, 3, 2)]),
    ((2, 3), [(1, 2, 2), (-1, 3, 2), (1, 3, 3), (1, 4, 1)]),
];

/// Labels of the entangled states kept in the restricted tensor product.
pub const KEPT_ENTANGLED: [usize; 4] = [17, 18, 19, 20];

/// Standard label of each vertex of the maximal tensor product of two squares,
/// listed in canonical (lexicographic) vertex order.
pub const LABEL_BY_CANONICAL_POSITION: [usize; 24] = [
    9, 3, 22, 21, 17, 18, 10, 4, 13, 7, 14, 8, 16, 6, 15, 5, 12, 2, 19, 23, 20, 24, 11, 1,
];

/// Corner `i` (1..=4) of the square.
pub fn state(i: usize) -> Vector {
    match i {
        1 => Vector::from_ints(&[1, 0, 1]),
        2 => Vector::from_ints(&[0, 1, 1]),
        3 => Vector::from_ints(&[-1, 0, 1]),
        4 => Vector::from_ints(&[0, -1, 1]),
        _ => panic!("square state index {i} out of 1..=4"),
    }
}

/// Extremal effect `i` (1..=4) of the square.
pub fn effect(i: usize) -> Vector {
    let v = match i {
        1 => Vector::from_ints(&[-1, -1, 1]),
        2 => Vector::from_ints(&[1, -1, 1]),
        3 => Vector::from_ints(&[1, 1, 1]),
        4 => Vector::from_ints(&[-1, 1, 1]),
        _ => panic!("square effect index {i} out of 1..=4"),
    };
    v.scale(&scalar::half())
}

pub fn unit() -> Vector {
    Vector::from_ints(&[0, 0, 1])
}

fn evaluate_terms(prefactor: Scalar, terms: &[Term], local: fn(usize) -> Vector) -> Vector {
    let products: Vec<(Scalar, Vector)> = terms
        .iter()
        .map(|&(sign, a, b)| (scalar::int(sign) * &prefactor, local(a).kron(&local(b))))
        .collect();
    combination(products.iter().map(|(c, v)| (c.clone(), v)))
}

/// Joint state with label 1..=24.
pub fn joint_state(label: usize) -> Vector {
    match label {
        1..=16 => {
            let a = (label - 1) / 4 + 1;
            let b = (label - 1) % 4 + 1;
            state(a).kron(&state(b))
        }
        17..=24 => evaluate_terms(scalar::half(), &ENTANGLED_STATE_TERMS[label - 17], state),
        _ => panic!("joint state label {label} out of 1..=24"),
    }
}

/// Entangled effect 17..=20 with its published prefactor.
pub fn entangled_effect(label: usize) -> Vector {
    assert!(
        (17..=20).contains(&label),
        "entangled effect label {label} out of 17..=20"
    );
    let ((n, d), terms) = ENTANGLED_EFFECT_TERMS[label - 17];
    evaluate_terms(scalar::frac(n, d), &terms, effect)
}

pub fn entangled_effect_prefactor(label: usize) -> Scalar {
    let ((n, d), _) = ENTANGLED_EFFECT_TERMS[label - 17];
    scalar::frac(n, d)
}

/// Label of a joint vertex of the maximal square tensor product.
pub fn label_of(vertex: &Vector) -> Option<usize> {
    (1..=24).find(|&l| joint_state(l) == *vertex)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{half, int};

    #[test]
    fn w17_evaluates_to_published_coordinates() {
        let h = half();
        let expected = Vector::new(vec![
            -h.clone(),
            h.clone(),
            int(0),
            -h.clone(),
            -h,
            int(0),
            int(0),
            int(0),
            int(1),
        ]);
        assert_eq!(joint_state(17), expected);
    }

    #[test]
    fn effects_and_states_pair_up() {
        for i in 1..=4 {
            for j in 1..=4 {
                let v = effect(i).dot(&state(j));
                // each effect vanishes on its own state and the next one
                let zero = j == i || j == i % 4 + 1;
                assert_eq!(v == int(0), zero, "e{i}(w{j})");
            }
        }
    }

    #[test]
    fn labels_are_distinct_and_normalized() {
        let uu = unit().kron(&unit());
        for l in 1..=24 {
            assert_eq!(uu.dot(&joint_state(l)), int(1));
            assert_eq!(label_of(&joint_state(l)), Some(l));
        }
    }
}
