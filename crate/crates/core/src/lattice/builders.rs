//! Named finite ortholattices.

use super::{FiniteOl, LatticeError, DEFAULT_MAX_ELEMENTS};

const ATOM_NAMES: &str = "abcdefghijklmnopqrstuvwxyz";

impl FiniteOl {
    /// The Boolean algebra on `n` atoms; element `k` is the subset with bitmask `k`.
    pub fn boolean(n: u32) -> FiniteOl {
        let size = 1usize << n;
        let labels = (0..size)
            .map(|k| {
                if k == 0 {
                    "0".to_string()
                } else if k == size - 1 {
                    "1".to_string()
                } else {
                    ATOM_NAMES
                        .chars()
                        .take(n as usize)
                        .enumerate()
                        .filter(|(i, _)| k >> i & 1 == 1)
                        .map(|(_, c)| c)
                        .collect()
                }
            })
            .collect();
        let ortho = (0..size).map(|k| !k & (size - 1)).collect();
        FiniteOl::from_order_fn(labels, |x, y| x & !y == 0, ortho, DEFAULT_MAX_ELEMENTS)
            .expect("powerset is a lattice")
    }

    /// The hexagon `0 < a < b < 1`, `0 < b' < a' < 1`.
    pub fn o6() -> FiniteOl {
        let labels = ["0", "a", "b", "b'", "a'", "1"].map(String::from).to_vec();
        let covers = [(0, 1), (1, 2), (2, 5), (0, 3), (3, 4), (4, 5)];
        FiniteOl::from_relation(labels, &covers, vec![5, 4, 3, 2, 1, 0]).expect("hexagon")
    }

    /// Horizontal sum of `n` four-element Boolean algebras: atoms `a, a', b, b', ...`.
    pub fn mo(n: usize) -> FiniteOl {
        assert!(n <= ATOM_NAMES.len());
        let mut labels = vec!["0".to_string()];
        for c in ATOM_NAMES.chars().take(n) {
            labels.push(c.to_string());
            labels.push(format!("{c}'"));
        }
        labels.push("1".to_string());
        let one = 2 * n + 1;
        let mut covers = Vec::new();
        let mut ortho = vec![one; one + 1];
        ortho[one] = 0;
        for k in 0..n {
            let (x, xo) = (2 * k + 1, 2 * k + 2);
            covers.extend([(0, x), (0, xo), (x, one), (xo, one)]);
            ortho[x] = xo;
            ortho[xo] = x;
        }
        FiniteOl::from_relation(labels, &covers, ortho).expect("horizontal sum")
    }

    /// Componentwise product; element `(x, y)` has index `x * |b| + y`.
    pub fn product(a: &FiniteOl, b: &FiniteOl) -> Result<FiniteOl, LatticeError> {
        let m = b.len();
        let labels = a
            .labels()
            .iter()
            .flat_map(|x| b.labels().iter().map(move |y| format!("({x},{y})")))
            .collect();
        let ortho = (0..a.len() * m)
            .map(|k| a.ortho(k / m) * m + b.ortho(k % m))
            .collect();
        FiniteOl::from_order_fn(
            labels,
            |p, q| a.leq(p / m, q / m) && b.leq(p % m, q % m),
            ortho,
            DEFAULT_MAX_ELEMENTS,
        )
    }
}
