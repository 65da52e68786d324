//! Union-find with optional rollback.

#[derive(Clone, Debug)]
pub struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
    history: Vec<(usize, usize)>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect(), size: vec![1; n], history: Vec::new() }
    }

    /// No path compression, so unions can be undone.
    pub fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Returns false if `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.history.push((a, b));
        true
    }

    pub fn checkpoint(&self) -> usize {
        self.history.len()
    }

    pub fn rollback(&mut self, to: usize) {
        while self.history.len() > to {
            let (a, b) = self.history.pop().unwrap();
            self.parent[b] = b;
            self.size[a] -= self.size[b];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::Dsu;

    #[test]
    fn union_and_rollback() {
        let mut d = Dsu::new(4);
        let cp = d.checkpoint();
        assert!(d.union(0, 1));
        assert!(d.union(1, 2));
        assert!(!d.union(0, 2));
        d.rollback(cp);
        assert!(!d.same(0, 2));
        assert!(d.union(2, 0));
    }
}
