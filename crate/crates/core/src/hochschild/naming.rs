//! Human-readable names for classes, in the vocabulary of the presets.

use crate::algebra::{Algebra, LinearMap, Shape};
use crate::chainring::RingElem;

use super::{cochain_derivation, CohomClass, Cohomology};

fn coefficient(a: &Algebra, c: RingElem) -> String {
    let s = a.ring().format(c);
    if s.contains('+') || s.contains('-') {
        format!("({s})")
    } else {
        s
    }
}

/// `d_0+d_1`, `2d_1`, `y↦y`, … depending on the shape of `a`.
pub fn describe_derivation(a: &Algebra, d: &LinearMap) -> String {
    match a.shape() {
        Shape::TruncatedPolynomial(m) if *m >= 2 => {
            let terms: Vec<String> = d
                .image(1)
                .iter()
                .enumerate()
                .filter(|(_, c)| c.0 != 0)
                .map(|(i, &c)| {
                    let coeff = coefficient(a, c);
                    if coeff == "1" {
                        format!("d_{i}")
                    } else {
                        format!("{coeff}d_{i}")
                    }
                })
                .collect();
            if terms.is_empty() {
                "0".into()
            } else {
                terms.join("+")
            }
        }
        Shape::Group(_) if a.rank() >= 2 && a.basis_name(1) == "y" => {
            if d.matrix.is_zero() {
                "0".into()
            } else {
                format!("y↦{}", a.format_element(d.image(1)))
            }
        }
        _ => {
            let mut rows: Vec<String> = (0..a.rank())
                .filter(|&i| d.image(i).iter().any(|x| x.0 != 0))
                .map(|i| format!("{}↦{}", a.basis_name(i), a.format_element(d.image(i))))
                .collect();
            match rows.len() {
                0 => "0".into(),
                1 => rows.pop().unwrap(),
                _ => format!("{{{}}}", rows.join(",")),
            }
        }
    }
}

/// Name of a class of `HH^n(A)`: the derivation for `n = 1`, the central
/// element for `n = 0`, canonical coordinates otherwise.
pub fn describe_class(a: &Algebra, h: &Cohomology, class: &CohomClass) -> String {
    let rep = h.representative(class);
    let regular = rep.len() == a.rank().pow(h.degree as u32 + 1);
    match h.degree {
        0 if regular => a.format_element(&rep),
        1 if regular => describe_derivation(a, &cochain_derivation(a, &rep)),
        _ => {
            let c: Vec<String> = class.coords.iter().map(|&x| h.ring().format(x)).collect();
            format!("({})", c.join(","))
        }
    }
}
