use super::{FiniteMetricSpace, Scalar};

/// Sum of consecutive distances along a vertex path.
pub fn path_length<T: Scalar>(space: &FiniteMetricSpace<T>, path: &[usize]) -> T {
    path.windows(2)
        .fold(T::zero(), |acc, w| acc + space.dist(w[0], w[1]))
}

/// Smallest `L` with `ℓ(q) ≤ K·d(q₋, q₊) + L` over all subpaths `q` of `path`.
pub fn quasi_geodesic_additive<T: Scalar>(space: &FiniteMetricSpace<T>, path: &[usize], k: T) -> T {
    let mut best = T::zero();
    for i in 0..path.len() {
        let mut len = T::zero();
        for j in i + 1..path.len() {
            len = len + space.dist(path[j - 1], path[j]);
            best = best.max_of(len - k * space.dist(path[i], path[j]));
        }
    }
    best
}

/// Hausdorff distance between two nonempty point sets; zero if either is empty.
pub fn hausdorff_distance<T: Scalar>(space: &FiniteMetricSpace<T>, a: &[usize], b: &[usize]) -> T {
    if a.is_empty() || b.is_empty() {
        return T::zero();
    }
    let directed = |p: &[usize], q: &[usize]| {
        p.iter().fold(T::zero(), |acc, &x| {
            let near = q
                .iter()
                .map(|&y| space.dist(x, y))
                .reduce(|u, v| u.min_of(v))
                .unwrap_or(T::zero());
            acc.max_of(near)
        })
    };
    directed(a, b).max_of(directed(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: usize) -> FiniteMetricSpace<f64> {
        FiniteMetricSpace::from_fn(n, |i, j| (i as f64 - j as f64).abs()).unwrap()
    }

    #[test]
    fn geodesic_has_zero_defect() {
        let s = line(6);
        assert_eq!(path_length(&s, &[0, 1, 2, 5]), 5.0);
        assert_eq!(quasi_geodesic_additive(&s, &[0, 1, 2, 3, 4, 5], 1.0), 0.0);
    }

    #[test]
    fn backtracking_costs() {
        let s = line(6);
        // 0→3→1: length 5, endpoint distance 1
        assert_eq!(quasi_geodesic_additive(&s, &[0, 3, 1], 1.0), 4.0);
        assert_eq!(quasi_geodesic_additive(&s, &[0, 3, 1], 5.0), 0.0);
    }

    #[test]
    fn hausdorff() {
        let s = line(6);
        assert_eq!(hausdorff_distance(&s, &[0, 1], &[0, 1]), 0.0);
        assert_eq!(hausdorff_distance(&s, &[0], &[0, 5]), 5.0);
        assert_eq!(hausdorff_distance(&s, &[0, 2], &[1, 3]), 1.0);
    }
}
