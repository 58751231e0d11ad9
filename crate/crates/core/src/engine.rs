//! The stateful entry point: rank limits, omega convention, caching, and
//! memoized solved factorizations per algebra.
//!
//! Completed tables and factorizations are immutable and shared behind `Arc`;
//! `Engine` methods take `&self` and are safe for concurrent reads.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::cache::{Cache, CacheChoice};
use crate::error::{Error, Result};
use crate::orbits::{Algebra, Family, OrbitPoset};
use crate::springer::{
    lusztig_shoji_solve, omega_matrix, springer_correspondence, KTildeMatrix, OmegaConvention,
    OmegaMatrix, SolvedFile, SpringerMap,
};
use crate::weyl::CharTable;

/// Per-family rank bounds. These keep runtimes at desk scale; raise them
/// explicitly when more is needed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_rank_a: u32,
    pub max_rank_bc: u32,
    pub max_rank_d: u32,
}

impl Default for Limits {
    fn default() -> Self {
        // Bounds are set to the ranges covered by the verification battery:
        // beyond them the block structure of the Springer correspondence
        // stops being forced by the checks this crate can run (type C first
        // fails at rank 6), so higher ranks are refused rather than guessed.
        Limits {
            max_rank_a: 8,
            max_rank_bc: 5,
            max_rank_d: 5,
        }
    }
}

impl Limits {
    /// Replaces every family bound by `rank`.
    pub fn uniform(rank: u32) -> Limits {
        Limits {
            max_rank_a: rank,
            max_rank_bc: rank,
            max_rank_d: rank,
        }
    }

    pub fn check(&self, alg: Algebra) -> Result<()> {
        let bound = match alg.family() {
            Family::A => self.max_rank_a,
            Family::B | Family::C => self.max_rank_bc,
            Family::D => self.max_rank_d,
            Family::G2 => return Ok(()),
        };
        if alg.rank() > bound {
            return Err(Error::RankBound {
                family: alg.family().letter(),
                rank: alg.rank(),
                bound,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct EngineOptions {
    pub limits: Limits,
    pub convention: OmegaConvention,
    pub cache: CacheChoice,
}

/// Everything derived from one algebra: the character table, closure poset,
/// Springer blocks, pairing matrix, and the solved factorization.
pub struct Solved {
    pub table: Arc<CharTable>,
    pub poset: Arc<OrbitPoset>,
    pub map: SpringerMap,
    pub omega: OmegaMatrix,
    pub ktilde: KTildeMatrix,
}

impl Solved {
    /// Stalk shift (2N - dim O)/2 of the poset node `i` (blocks share the
    /// poset's node order).
    pub fn a_value(&self, i: usize) -> u64 {
        self.map.blocks()[i].a_value
    }
}

pub struct Engine {
    limits: Limits,
    convention: OmegaConvention,
    cache: Cache,
    tables: Mutex<HashMap<Algebra, Arc<CharTable>>>,
    solved: Mutex<HashMap<Algebra, Arc<Solved>>>,
}

impl Engine {
    pub fn new(options: EngineOptions) -> Engine {
        Engine {
            limits: options.limits,
            convention: options.convention,
            cache: Cache::new(options.cache),
            tables: Mutex::new(HashMap::new()),
            solved: Mutex::new(HashMap::new()),
        }
    }

    /// Default engine: env-configured cache, default limits and convention.
    pub fn with_defaults() -> Engine {
        Engine::new(EngineOptions::default())
    }

    /// Cache-free engine for deterministic tests.
    pub fn for_tests() -> Engine {
        Engine::new(EngineOptions {
            cache: CacheChoice::Disabled,
            ..EngineOptions::default()
        })
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn convention(&self) -> OmegaConvention {
        self.convention
    }

    pub fn cache(&self) -> &Cache {
        &self.cache
    }

    /// The exact character table of the Weyl group (memoized; a JSON snapshot
    /// is written to the cache directory when caching is enabled).
    pub fn character_table(&self, alg: Algebra) -> Result<Arc<CharTable>> {
        self.limits.check(alg)?;
        if let Some(t) = self.tables.lock().unwrap().get(&alg) {
            return Ok(Arc::clone(t));
        }
        let table = Arc::new(CharTable::build(alg)?);
        self.cache
            .store(&format!("chartable-{alg}"), &table.to_file());
        self.tables
            .lock()
            .unwrap()
            .entry(alg)
            .or_insert_with(|| Arc::clone(&table));
        Ok(table)
    }

    /// The solved factorization bundle for an algebra (memoized and disk
    /// cached; the cache is advisory and any invalid file is recomputed).
    pub fn solved(&self, alg: Algebra) -> Result<Arc<Solved>> {
        if !alg.family().is_classical() {
            return Err(Error::Unsupported {
                family: "G2",
                operation: "stalk computations",
            });
        }
        self.limits.check(alg)?;
        if let Some(s) = self.solved.lock().unwrap().get(&alg) {
            return Ok(Arc::clone(s));
        }

        let table = self.character_table(alg)?;
        let poset = Arc::new(OrbitPoset::build(alg)?);
        let stem = format!("ktilde-{alg}-{}", self.convention.key());

        let solved = match self.load_cached(&stem, alg, &table) {
            Some((map, omega, ktilde)) => Solved {
                table,
                poset,
                map,
                omega,
                ktilde,
            },
            None => {
                let map = springer_correspondence(&table)?;
                let omega = omega_matrix(&table, &map, self.convention)?;
                let ktilde = lusztig_shoji_solve(&omega, &map)?;
                self.cache.store(
                    &stem,
                    &SolvedFile {
                        algebra: alg.to_string(),
                        convention: self.convention,
                        map: map.clone(),
                        omega: omega.clone(),
                        ktilde: ktilde.clone(),
                    },
                );
                Solved {
                    table,
                    poset,
                    map,
                    omega,
                    ktilde,
                }
            }
        };
        let solved = Arc::new(solved);
        self.solved
            .lock()
            .unwrap()
            .entry(alg)
            .or_insert_with(|| Arc::clone(&solved));
        Ok(solved)
    }

    fn load_cached(
        &self,
        stem: &str,
        alg: Algebra,
        table: &CharTable,
    ) -> Option<(SpringerMap, OmegaMatrix, KTildeMatrix)> {
        let file: SolvedFile = self.cache.load(stem)?;
        // structural validation; anything off is a miss
        if file.algebra != alg.to_string() || file.convention != self.convention {
            return None;
        }
        if file.map.algebra() != alg || file.ktilde.algebra() != alg {
            return None;
        }
        let n_chars = table.irreps().len();
        let member_total: usize = file.map.blocks().iter().map(|b| b.members.len()).sum();
        if member_total != n_chars
            || file.omega.len() != n_chars
            || file.ktilde.char_order().len() != n_chars
        {
            return None;
        }
        Some((file.map, file.omega, file.ktilde))
    }
}
