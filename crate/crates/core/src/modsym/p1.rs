use num_integer::Integer;

/// The projective line over `Z/N`: pairs `(c, d)` with `gcd(c, d, N) = 1`
/// modulo scaling by units. Each class is represented by its
/// lexicographically smallest member.
#[derive(Clone, Debug)]
pub struct P1List {
    level: u64,
    reps: Vec<(u64, u64)>,
    /// `c·N + d -> class index`, `usize::MAX` for pairs outside P¹.
    table: Vec<usize>,
}

impl P1List {
    pub fn new(n: u64) -> Self {
        let nn = n as usize;
        let units: Vec<u64> = (0..n.max(1)).filter(|u| u.gcd(&n) == 1).collect();
        let mut table = vec![usize::MAX; nn * nn];
        let mut reps = Vec::new();
        for c in 0..n {
            for d in 0..n {
                let k = (c * n + d) as usize;
                if table[k] != usize::MAX || c.gcd(&d).gcd(&n) != 1 {
                    continue;
                }
                let idx = reps.len();
                reps.push((c, d));
                for &u in &units {
                    table[((u * c % n) * n + u * d % n) as usize] = idx;
                }
            }
        }
        P1List { level: n, reps, table }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn get(&self, i: usize) -> (u64, u64) {
        self.reps[i]
    }

    pub fn list(&self) -> &[(u64, u64)] {
        &self.reps
    }

    pub fn index_of(&self, c: i64, d: i64) -> Option<usize> {
        let n = self.level as i64;
        let (c, d) = (c.rem_euclid(n), d.rem_euclid(n));
        let k = self.table[(c * n + d) as usize];
        (k != usize::MAX).then_some(k)
    }
}
