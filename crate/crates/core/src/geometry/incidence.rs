//! Abstract point-line incidence structures, used for the derived planes
//! whose points are segments rather than projective points.

use std::collections::HashMap;

/// Points are `0..n_points`; each line is a sorted list of point indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceStructure {
    n_points: usize,
    lines: Vec<Vec<usize>>,
    through: Vec<Vec<usize>>,
}

impl IncidenceStructure {
    pub fn new(n_points: usize, lines: Vec<Vec<usize>>) -> Self {
        let mut lines: Vec<Vec<usize>> = lines
            .into_iter()
            .map(|mut l| {
                l.sort_unstable();
                l.dedup();
                l
            })
            .collect();
        lines.sort();
        lines.dedup();
        let mut through = vec![Vec::new(); n_points];
        for (i, l) in lines.iter().enumerate() {
            for &p in l {
                through[p].push(i);
            }
        }
        IncidenceStructure { n_points, lines, through }
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn lines(&self) -> &[Vec<usize>] {
        &self.lines
    }

    pub fn lines_through(&self, p: usize) -> &[usize] {
        &self.through[p]
    }

    /// Number of lines through each pair of distinct points.
    fn pair_counts(&self) -> HashMap<(usize, usize), usize> {
        let mut counts = HashMap::new();
        for l in &self.lines {
            for (i, &a) in l.iter().enumerate() {
                for &b in &l[i + 1..] {
                    *counts.entry((a, b)).or_insert(0) += 1;
                }
            }
        }
        counts
    }

    /// Every pair of distinct points lies on exactly one line.
    pub fn is_linear_space(&self) -> bool {
        let counts = self.pair_counts();
        let pairs = self.n_points * self.n_points.saturating_sub(1) / 2;
        counts.len() == pairs && counts.values().all(|&c| c == 1)
    }

    pub fn line_through(&self, a: usize, b: usize) -> Option<usize> {
        self.through[a].iter().copied().find(|&l| self.lines[l].binary_search(&b).is_ok())
    }

    /// Affine plane of order n: n^2 points, lines of size n, a linear space,
    /// and through each point off a line exactly one line missing it.
    pub fn is_affine_plane(&self, n: usize) -> bool {
        if n < 2 || self.n_points != n * n || self.lines.len() != n * n + n {
            return false;
        }
        if self.lines.iter().any(|l| l.len() != n) || !self.is_linear_space() {
            return false;
        }
        self.lines.iter().all(|l| {
            (0..self.n_points).filter(|p| l.binary_search(p).is_err()).all(|p| {
                self.through[p].iter().filter(|&&m| disjoint(&self.lines[m], l)).count() == 1
            })
        })
    }

    /// Projective plane of order n: n^2+n+1 points and lines, lines of size
    /// n+1, a linear space, and any two lines meet in exactly one point.
    pub fn is_projective_plane(&self, n: usize) -> bool {
        let size = n * n + n + 1;
        if n < 2 || self.n_points != size || self.lines.len() != size {
            return false;
        }
        if self.lines.iter().any(|l| l.len() != n + 1) || !self.is_linear_space() {
            return false;
        }
        self.lines
            .iter()
            .enumerate()
            .all(|(i, a)| self.lines[i + 1..].iter().all(|b| common(a, b) == 1))
    }

    /// Classes of pairwise disjoint lines, grouped greedily in line order.
    /// For an affine plane these are exactly its parallel classes.
    pub fn parallel_classes(&self) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.lines.len()];
        let mut classes = Vec::new();
        for i in 0..self.lines.len() {
            if assigned[i] {
                continue;
            }
            let mut class = vec![i];
            assigned[i] = true;
            for j in i + 1..self.lines.len() {
                if !assigned[j] && class.iter().all(|&c| disjoint(&self.lines[c], &self.lines[j])) {
                    class.push(j);
                    assigned[j] = true;
                }
            }
            classes.push(class);
        }
        classes
    }

    /// No line contains three of the given points.
    pub fn is_arc(&self, points: &[usize]) -> bool {
        self.first_collinear_triple(points).is_none()
    }

    pub fn first_collinear_triple(&self, points: &[usize]) -> Option<Vec<usize>> {
        let mut sorted = points.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for l in &self.lines {
            let on: Vec<usize> = sorted.iter().copied().filter(|p| l.binary_search(p).is_ok()).collect();
            if on.len() >= 3 {
                return Some(on[..3].to_vec());
            }
        }
        None
    }

    /// Number of given points on each line.
    pub fn secant_counts(&self, points: &[usize]) -> Vec<usize> {
        self.lines
            .iter()
            .map(|l| points.iter().filter(|p| l.binary_search(p).is_ok()).count())
            .collect()
    }
}

fn disjoint(a: &[usize], b: &[usize]) -> bool {
    common(a, b) == 0
}

fn common(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}
