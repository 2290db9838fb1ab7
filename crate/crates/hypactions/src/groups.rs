//! Groups named by a config, and element parsing with config paths in errors.

use std::collections::BTreeMap;

use hypactions_core::group::{enumerate_ball, Ball, BaumslagSolitar, FreeGroup, FreeWord, Group};
use hypactions_core::sl2::Sl2Group;

use crate::config::GroupSpec;
use crate::error::RunError;

pub fn free(spec: &Option<GroupSpec>) -> Result<FreeGroup, RunError> {
    match spec {
        Some(GroupSpec::Free { rank }) => Ok(FreeGroup::new(*rank)),
        _ => Err(RunError::invalid("$.group.kind", "expected free")),
    }
}

pub fn sl2(spec: &Option<GroupSpec>) -> Result<Sl2Group, RunError> {
    match spec {
        Some(GroupSpec::Sl2 { field }) => Ok(Sl2Group::new(field.d)?),
        _ => Err(RunError::invalid("$.group.kind", "expected sl2")),
    }
}

/// Parses `text` in `group`, reporting failures at `path`.
pub fn element<G: Group>(group: &G, text: &str, path: &str) -> Result<G::Element, RunError> {
    group
        .parse(text)
        .map_err(|e| RunError::invalid(path, format!("cannot parse \"{text}\": {e}")))
}

/// A free word that must only use the first `rank` letters.
pub fn free_word(rank: u32, text: &str, path: &str) -> Result<FreeWord, RunError> {
    let w = FreeWord::parse(text)
        .map_err(|e| RunError::invalid(path, format!("cannot parse \"{text}\": {e}")))?;
    if w.min_rank() > rank {
        return Err(RunError::invalid(
            path,
            format!("\"{text}\" uses letters beyond rank {rank}"),
        ));
    }
    Ok(w)
}

pub fn standard_ball<G: Group>(
    group: &G,
    gens: &[G::Element],
    radius: usize,
    cap: usize,
) -> Result<Ball<G::Element>, RunError> {
    Ok(enumerate_ball(group, gens, radius, cap)?)
}

/// Exact word lengths of BS(m,n) up to `radius`, from a BFS ball.
pub fn bs_lengths(
    group: &BaumslagSolitar,
    radius: usize,
    cap: usize,
) -> Result<BTreeMap<<BaumslagSolitar as Group>::Element, f64>, RunError> {
    Ok(enumerate_ball(group, &group.standard_generators(), radius, cap)?.length_map())
}
