//! Orthomodular lattices from Greechie diagrams.
//!
//! A diagram is a list of blocks, each a set of atoms; blocks are pasted at
//! 0 and 1 and share atoms by name. Two atoms are orthogonal when they are
//! distinct and lie in a common block. Inside a block `B`, the join of a
//! subset `X` is identified by the atoms below it: the atoms orthogonal to
//! every atom of `B \ X`. Elements are ordered by inclusion of these atom sets.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::{FiniteOl, LatticeError, DEFAULT_MAX_ELEMENTS};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreechieDiagram {
    pub atoms: Vec<String>,
    /// Atom indices of each block.
    pub blocks: Vec<Vec<usize>>,
}

impl GreechieDiagram {
    pub fn from_blocks<S: AsRef<str>>(blocks: &[Vec<S>]) -> Result<Self, LatticeError> {
        let mut atoms: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut out = Vec::new();
        for block in blocks {
            let mut ids = Vec::new();
            for token in block {
                let token = token.as_ref().to_string();
                let next = atoms.len();
                let id = *index.entry(token.clone()).or_insert(next);
                if id == next {
                    atoms.push(token.clone());
                }
                if ids.contains(&id) {
                    return Err(LatticeError::Greechie(format!("atom {token} repeated in a block")));
                }
                ids.push(id);
            }
            if ids.len() < 2 {
                return Err(LatticeError::Greechie("a block needs at least two atoms".into()));
            }
            out.push(ids);
        }
        if out.is_empty() {
            return Err(LatticeError::Greechie("no blocks".into()));
        }
        Ok(GreechieDiagram { atoms, blocks: out })
    }

    /// One block per non-empty line, atoms separated by whitespace; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, LatticeError> {
        let blocks: Vec<Vec<&str>> = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>())
            .filter(|b| !b.is_empty())
            .collect();
        Self::from_blocks(&blocks)
    }

    pub fn to_text(&self) -> String {
        self.blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|&a| self.atoms[a].as_str())
                    .collect::<Vec<_>>()
                    .join(" ")
                    + "\n"
            })
            .collect()
    }

    fn orthogonality(&self) -> Vec<FixedBitSet> {
        let n = self.atoms.len();
        let mut perp = vec![FixedBitSet::with_capacity(n); n];
        for block in &self.blocks {
            for &a in block {
                for &b in block {
                    if a != b {
                        perp[a].insert(b);
                    }
                }
            }
        }
        perp
    }

    pub fn to_lattice(&self) -> Result<FiniteOl, LatticeError> {
        self.to_lattice_limited(DEFAULT_MAX_ELEMENTS)
    }

    pub fn to_lattice_limited(&self, limit: usize) -> Result<FiniteOl, LatticeError> {
        let n = self.atoms.len();
        let perp = self.orthogonality();
        // atoms below the join of `block \ complement`
        let below = |complement: &[usize]| {
            let mut set = FixedBitSet::with_capacity(n);
            set.insert_range(..);
            for &c in complement {
                set.intersect_with(&perp[c]);
            }
            set
        };

        struct Entry {
            atoms: FixedBitSet,
            ortho_atoms: FixedBitSet,
            height: usize,
            label: String,
        }
        let mut entries: Vec<Entry> = Vec::new();
        let mut index: HashMap<FixedBitSet, usize> = HashMap::new();

        for block in &self.blocks {
            let k = block.len();
            if k > 20 {
                return Err(LatticeError::Greechie("block too large".into()));
            }
            for mask in 0u32..(1 << k) {
                let inside: Vec<usize> = (0..k).filter(|&t| mask >> t & 1 == 1).map(|t| block[t]).collect();
                let outside: Vec<usize> = (0..k).filter(|&t| mask >> t & 1 == 0).map(|t| block[t]).collect();
                let atoms = below(&outside);
                let ortho_atoms = below(&inside);
                if mask == 0 && !atoms.is_clear() {
                    let a = atoms.ones().next().unwrap();
                    return Err(LatticeError::Greechie(format!(
                        "atom {} is orthogonal to a whole block it does not belong to",
                        self.atoms[a]
                    )));
                }
                let label = if inside.is_empty() {
                    "0".to_string()
                } else if outside.is_empty() {
                    "1".to_string()
                } else if inside.len() == 1 {
                    self.atoms[inside[0]].clone()
                } else if outside.len() == 1 {
                    format!("{}'", self.atoms[outside[0]])
                } else {
                    inside.iter().map(|&a| self.atoms[a].as_str()).collect::<Vec<_>>().join("+")
                };
                match index.get(&atoms) {
                    Some(&e) => {
                        if entries[e].ortho_atoms != ortho_atoms {
                            return Err(LatticeError::Greechie(format!(
                                "element {} gets two different complements",
                                entries[e].label
                            )));
                        }
                    }
                    None => {
                        if entries.len() >= limit {
                            return Err(LatticeError::TooLarge {
                                size: entries.len() + 1,
                                limit,
                            });
                        }
                        index.insert(atoms.clone(), entries.len());
                        entries.push(Entry {
                            atoms,
                            ortho_atoms,
                            height: inside.len(),
                            label,
                        });
                    }
                }
            }
        }

        let mut order: Vec<usize> = (0..entries.len()).collect();
        order.sort_by_key(|&e| entries[e].height);
        let mut position = vec![0; entries.len()];
        for (p, &e) in order.iter().enumerate() {
            position[e] = p;
        }
        let labels = order.iter().map(|&e| entries[e].label.clone()).collect();
        let ortho = order
            .iter()
            .map(|&e| {
                index
                    .get(&entries[e].ortho_atoms)
                    .map(|&o| position[o])
                    .ok_or_else(|| LatticeError::Greechie(format!("complement of {} is missing", entries[e].label)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let lattice = FiniteOl::from_order_fn(
            labels,
            |x, y| entries[order[x]].atoms.is_subset(&entries[order[y]].atoms),
            ortho,
            limit,
        )
        .map_err(|e| LatticeError::Greechie(format!("pasting is not a lattice: {e}")))?;
        if !lattice.is_ortholattice() {
            return Err(LatticeError::Greechie("pasting is not an ortholattice".into()));
        }
        if let Some((x, y)) = lattice.check_orthomodular().witness {
            return Err(LatticeError::NotOrthomodular(x, y));
        }
        Ok(lattice)
    }
}

impl FiniteOl {
    pub fn from_greechie(diagram: &GreechieDiagram) -> Result<FiniteOl, LatticeError> {
        diagram.to_lattice()
    }
}
