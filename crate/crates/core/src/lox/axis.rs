use alloc::vec::Vec;

use super::LoxError;
use crate::group::Group;
use crate::metric::{Length, MetricError};

/// Concatenated translates `gᵏγ` of a geodesic label `γ` from `1` to `g`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiAxis<E> {
    pub element: E,
    /// Generator sequence of `γ`.
    pub base_word: Vec<E>,
    pub window: usize,
    /// `(parameter, vertex)`; parameter `k·|γ| + j` for the `j`-th vertex of `gᵏγ`.
    pub vertices: Vec<(i64, E)>,
}

impl<E: Clone> QuasiAxis<E> {
    pub fn points(&self) -> Vec<E> {
        self.vertices.iter().map(|(_, v)| v.clone()).collect()
    }
}

/// Translates `gᵏγ` for `−window ≤ k < max(window, 1)`, so window 0 is the
/// single segment from `1` to `g`.
pub fn build_quasi_axis<G: Group, L: Length<G::Element> + ?Sized>(
    group: &G,
    g: &G::Element,
    gamma: &[G::Element],
    window: usize,
    len: &L,
) -> Result<QuasiAxis<G::Element>, LoxError> {
    let product = gamma
        .iter()
        .fold(group.identity(), |acc, s| group.multiply(&acc, s));
    if product != *g {
        return Err(LoxError::LabelMismatch);
    }
    let word_length = len
        .length(g)
        .ok_or_else(|| MetricError::DomainMiss(group.render(g)))?;
    if gamma.len() as f64 > word_length + crate::ABS_TOL {
        return Err(LoxError::NonGeodesicLabel {
            label: gamma.len(),
            word_length,
        });
    }
    let w = window as i64;
    let l = gamma.len() as i64;
    let mut vertices = Vec::new();
    let mut start = group.pow(g, -w);
    let end = w.max(1);
    for k in -w..end {
        let mut v = start.clone();
        for (j, s) in gamma.iter().enumerate() {
            vertices.push((k * l + j as i64, v.clone()));
            v = group.multiply(&v, s);
        }
        start = group.multiply(&start, g);
    }
    vertices.push((end * l, start));
    Ok(QuasiAxis {
        element: g.clone(),
        base_word: gamma.to_vec(),
        window,
        vertices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FreeGroup, FreeWord};
    use crate::metric::free_word_length;
    use alloc::vec;

    fn w(s: &str) -> FreeWord {
        FreeWord::parse(s).unwrap()
    }

    #[test]
    fn axis_of_a_generator() {
        let f2 = FreeGroup::new(2);
        let ax = build_quasi_axis(&f2, &w("a"), &[w("a")], 2, &free_word_length).unwrap();
        assert_eq!(
            ax.points(),
            vec![w("A^2"), w("A"), w("1"), w("a"), w("a^2")]
        );
        let params: Vec<i64> = ax.vertices.iter().map(|v| v.0).collect();
        assert_eq!(params, vec![-2, -1, 0, 1, 2]);
    }

    #[test]
    fn axis_of_ab() {
        let f2 = FreeGroup::new(2);
        let ax = build_quasi_axis(&f2, &w("ab"), &[w("a"), w("b")], 1, &free_word_length).unwrap();
        assert_eq!(ax.points(), vec![w("BA"), w("B"), w("1"), w("a"), w("ab")]);
        let seg = build_quasi_axis(&f2, &w("ab"), &[w("a"), w("b")], 0, &free_word_length).unwrap();
        assert_eq!(seg.points(), vec![w("1"), w("a"), w("ab")]);
    }

    #[test]
    fn label_checks() {
        let f2 = FreeGroup::new(2);
        let err = build_quasi_axis(
            &f2,
            &w("a"),
            &[w("a"), w("b"), w("B")],
            1,
            &free_word_length,
        )
        .unwrap_err();
        assert_eq!(
            err,
            LoxError::NonGeodesicLabel {
                label: 3,
                word_length: 1.0
            }
        );
        let err = build_quasi_axis(&f2, &w("a"), &[w("b")], 1, &free_word_length).unwrap_err();
        assert_eq!(err, LoxError::LabelMismatch);
    }

    #[test]
    fn consecutive_vertices_are_adjacent() {
        let f2 = FreeGroup::new(2);
        let g = w("abA");
        let ax =
            build_quasi_axis(&f2, &g, &[w("a"), w("b"), w("A")], 3, &free_word_length).unwrap();
        for pair in ax.vertices.windows(2) {
            assert_eq!(pair[0].1.inverse().mul(&pair[1].1).len(), 1);
            assert_eq!(pair[1].0, pair[0].0 + 1);
        }
    }
}
