use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use super::{describe, Length, MetricError};
use crate::group::Group;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Axiom {
    Identity,
    NonNegative,
    Symmetry,
    Subadditivity,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Identity => "identity",
            Axiom::NonNegative => "non-negativity",
            Axiom::Symmetry => "symmetry",
            Axiom::Subadditivity => "subadditivity",
        })
    }
}

/// A pseudo-length materialized on a finite domain.
///
/// The domain keeps its enumeration order, which [`log_transform`] and the
/// CSV writers follow.
#[derive(Clone, Debug, PartialEq)]
pub struct PseudoLength<E> {
    order: Vec<E>,
    values: BTreeMap<E, f64>,
}

impl<E: Clone + Ord> PseudoLength<E> {
    /// Wraps the values without checking any axiom. Later duplicates win.
    pub fn from_pairs_unchecked(pairs: impl IntoIterator<Item = (E, f64)>) -> Self {
        let mut order = Vec::new();
        let mut values = BTreeMap::new();
        for (e, v) in pairs {
            if values.insert(e.clone(), v).is_none() {
                order.push(e);
            }
        }
        PseudoLength { order, values }
    }

    pub fn domain(&self) -> &[E] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn get(&self, g: &E) -> Option<f64> {
        self.values.get(g).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&E, f64)> + '_ {
        self.order.iter().map(move |e| (e, self.values[e]))
    }

    /// Checks the axioms on every pair and triple lying in the domain.
    pub fn validate<G: Group<Element = E>>(&self, group: &G) -> Result<(), MetricError> {
        let id = group.identity();
        match self.get(&id) {
            Some(v) if v.abs() <= crate::ABS_TOL => {}
            Some(v) => {
                return Err(MetricError::AxiomViolation {
                    axiom: Axiom::Identity,
                    detail: format!("l(1) = {v}"),
                })
            }
            None => {
                return Err(MetricError::AxiomViolation {
                    axiom: Axiom::Identity,
                    detail: "identity outside the domain".into(),
                })
            }
        }
        for (g, v) in self.iter() {
            if v < -crate::ABS_TOL || v.is_nan() {
                return Err(MetricError::AxiomViolation {
                    axiom: Axiom::NonNegative,
                    detail: format!("l({}) = {v}", group.render(g)),
                });
            }
            if let Some(w) = self.get(&group.invert(g)) {
                if (v - w).abs() > tolerance(v, w) {
                    return Err(MetricError::AxiomViolation {
                        axiom: Axiom::Symmetry,
                        detail: format!("l({}) = {v} but l of its inverse = {w}", group.render(g)),
                    });
                }
            }
        }
        for (g, lg) in self.iter() {
            for (h, lh) in self.iter() {
                let gh = group.multiply(g, h);
                if let Some(lgh) = self.get(&gh) {
                    if lgh > lg + lh + tolerance(lg, lh) {
                        return Err(MetricError::AxiomViolation {
                            axiom: Axiom::Subadditivity,
                            detail: format!(
                                "l({}) = {lgh} > {lg} + {lh} for g = {}, h = {}",
                                group.render(&gh),
                                group.render(g),
                                group.render(h)
                            ),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// `log₂(ℓ(gᵢ)+1)` along the domain order.
    pub fn log_transform(&self) -> Vec<f64> {
        log_transform(self.iter().map(|(_, v)| v))
    }
}

fn tolerance(a: f64, b: f64) -> f64 {
    crate::ABS_TOL * (1.0 + a.abs() + b.abs())
}

impl<E: Ord> Length<E> for PseudoLength<E> {
    fn length(&self, g: &E) -> Option<f64> {
        self.values.get(g).copied()
    }
}

/// Orbit pseudo-length `g ↦ d(s, g·s)`, given as a table of displacements.
/// Validates the axioms on the whole table.
pub fn orbit_pseudo_length<G: Group>(
    group: &G,
    displacements: impl IntoIterator<Item = (G::Element, f64)>,
) -> Result<PseudoLength<G::Element>, MetricError> {
    let l = PseudoLength::from_pairs_unchecked(displacements);
    if l.is_empty() {
        return Err(MetricError::EmptyDomain);
    }
    l.validate(group)?;
    Ok(l)
}

/// `log₂(v+1)` for each value, in order.
pub fn log_transform(values: impl IntoIterator<Item = f64>) -> Vec<f64> {
    values.into_iter().map(|v| libm::log2(v + 1.0)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Direction {
    /// `ℓ₁ ≤ Cℓ₂ + C` holds on the domain.
    Dominated,
    /// The probe ratio keeps growing. Finite-scale evidence only.
    NotDominated,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport<E> {
    pub direction: Direction,
    /// Minimal `C` with `ℓ₁ ≤ Cℓ₂ + C` on the shared domain.
    pub constant: f64,
    /// `sup ℓ₁/ℓ₂` over elements with `ℓ₂ > 0`.
    pub slope: f64,
    /// Element attaining `constant`.
    pub worst_witness: E,
    /// Set whenever the verdict rests on a finite probe rather than a certificate.
    pub evidence_only: bool,
    pub checked: usize,
    /// `(ℓ₁+1)/(ℓ₂+1)` along the probe, if one was given.
    pub probe_ratios: Vec<f64>,
}

/// Fits `ℓ₁ ≤ Cℓ₂ + C` on the shared domain of `l1` and `l2`.
///
/// With a probe sequence of at least three elements, a strictly increasing
/// ratio `(ℓ₁+1)/(ℓ₂+1)` along it yields [`Direction::NotDominated`], always
/// flagged as evidence only.
pub fn compare_pseudo_lengths<E: Clone + Ord + fmt::Debug>(
    l1: &PseudoLength<E>,
    l2: &PseudoLength<E>,
    probe: Option<&[E]>,
) -> Result<ComparisonReport<E>, MetricError> {
    let mut constant = f64::NEG_INFINITY;
    let mut slope = 0.0f64;
    let mut worst = None;
    let mut checked = 0;
    for (g, a) in l1.iter() {
        let Some(b) = l2.get(g) else { continue };
        checked += 1;
        let c = a / (b + 1.0);
        if c > constant {
            constant = c;
            worst = Some(g.clone());
        }
        if b > crate::ABS_TOL {
            slope = slope.max(a / b);
        } else if a > crate::ABS_TOL {
            slope = f64::INFINITY;
        }
    }
    let worst_witness = worst.ok_or(MetricError::EmptyDomain)?;
    let constant = constant.max(0.0);
    let mut direction = Direction::Dominated;
    let mut evidence_only = false;
    let mut probe_ratios = Vec::new();
    if let Some(probe) = probe {
        for g in probe {
            match (l1.get(g), l2.get(g)) {
                (Some(a), Some(b)) => probe_ratios.push((a + 1.0) / (b + 1.0)),
                _ => return Err(MetricError::DomainMiss(describe(&[g]))),
            }
        }
        if probe_ratios.len() < 3 {
            direction = Direction::Inconclusive;
            evidence_only = true;
        } else if probe_ratios
            .windows(2)
            .all(|w| w[1] > w[0] + crate::ABS_TOL)
        {
            direction = Direction::NotDominated;
            evidence_only = true;
        }
    }
    Ok(ComparisonReport {
        direction,
        constant,
        slope,
        worst_witness,
        evidence_only,
        checked,
        probe_ratios,
    })
}
