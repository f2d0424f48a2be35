/// A finite multiset of vertex ordinals, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multiset(Vec<usize>);

impl Multiset {
    pub fn new(mut items: Vec<usize>) -> Self {
        items.sort_unstable();
        Self(items)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    /// `(element, multiplicity)` pairs in ascending element order.
    pub fn counts(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &x in &self.0 {
            match out.last_mut() {
                Some((y, m)) if *y == x => *m += 1,
                _ => out.push((x, 1)),
            }
        }
        out
    }

    /// Number of distinct orderings, `|M|! / prod m!`. Saturates at `u128::MAX`.
    pub fn orderings_count(&self) -> u128 {
        multinomial(self.counts().into_iter().map(|(_, m)| m))
    }
}

/// Number of distinct orderings of `items`.
pub fn orderings_count<T: Ord + Clone>(items: &[T]) -> u128 {
    let mut sorted = items.to_vec();
    sorted.sort();
    let mut runs = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        runs.push(j - i);
        i = j;
    }
    multinomial(runs.into_iter())
}

pub(crate) fn multinomial(mults: impl Iterator<Item = usize>) -> u128 {
    let mut total: u128 = 0;
    let mut acc: u128 = 1;
    for m in mults {
        for i in 1..=m as u128 {
            total += 1;
            // acc * C(total, i) / C(total-1, i-1) = acc * total / i, exact at each step.
            acc = match acc.checked_mul(total) {
                Some(v) => v / i,
                None => return u128::MAX,
            };
        }
    }
    acc
}
