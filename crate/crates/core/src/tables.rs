//! Lookup tables of low-stem homotopy groups and mapping groups.
//!
//! The table covers the three families of spaces that occur as stable wedge
//! summands of the manifolds this crate models:
//!
//! * spheres `S^d`,
//! * Moore spaces `P^d(p^r) = S^{d-1} ∪ e^d` (top cell attached by degree
//!   `p^r`), and
//! * two-cell complexes `C^d_η = S^{d-2} ∪_η e^d` with cells glued by the
//!   Hopf class.
//!
//! Rows live in `data/homotopy_tables.json`, which is compiled into the
//! library. Each row matches a family of spaces (exact or lower-bounded
//! dimension, coefficient prime constraints for Moore spaces) at a fixed
//! *stem*, the difference between the degree of the group and the nominal
//! (top-cell) dimension of the space. Mapping-group rows match a pair of
//! space families at a fixed dimension offset. Rows are checked in file
//! order and the first match wins, so exceptional low dimensions precede
//! the parametric families they puncture.
//!
//! A successful lookup returns the group together with the names of its
//! generators; relations between those generators that the engines rely on
//! are recorded in the `relations` section. One relation carries a genuinely
//! undetermined sign `epsilon`; it is flagged as symbolic rather than being
//! resolved arbitrarily.
//!
//! **Absence means ignorance, not triviality.** `None` from a lookup says
//! the table has no information; callers must not read it as the zero group.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::group::FgAbGroup;

/// One of the three space families the tables know about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Space {
    /// The sphere of the given dimension.
    Sphere { dim: u32 },
    /// The Moore space with a single cell in dimension `dim` attached to
    /// `S^{dim-1}` by the degree-`p^r` map.
    Moore { dim: u32, p: u64, r: u32 },
    /// The complex `S^{dim-2} ∪_η e^{dim}`.
    Chang { dim: u32 },
}

impl Space {
    /// Nominal dimension: the top-cell dimension of the space.
    pub fn dim(&self) -> u32 {
        match *self {
            Space::Sphere { dim } | Space::Moore { dim, .. } | Space::Chang { dim } => dim,
        }
    }

    /// The coefficient `p^r` for a Moore space, `None` otherwise.
    pub fn coefficient(&self) -> Option<u64> {
        match *self {
            Space::Moore { p, r, .. } => Some(
                p.checked_pow(r)
                    .expect("Moore space coefficient overflows u64"),
            ),
            _ => None,
        }
    }
}

impl std::fmt::Display for Space {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Space::Sphere { dim } => write!(f, "S{}", crate::group::superscript(dim as usize)),
            Space::Moore { dim, p, r } => {
                let q = p
                    .checked_pow(r)
                    .expect("Moore space coefficient overflows u64");
                write!(f, "P{}({})", crate::group::superscript(dim as usize), q)
            }
            Space::Chang { dim } => write!(f, "C{}η", crate::group::superscript(dim as usize)),
        }
    }
}

/// A successful table lookup: the group plus bookkeeping about generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub group: FgAbGroup,
    /// Generator names in the order matching the template summands.
    pub generators: Vec<String>,
    pub note: Option<String>,
}

/// A recorded relation between generators appearing in the table.
#[derive(Clone, Debug, Deserialize)]
pub struct Relation {
    pub statement: String,
    pub context: String,
    /// Names of symbols in the statement whose value is undetermined.
    #[serde(default)]
    pub symbolic: Vec<String>,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(try_from = "BoundPatRaw")]
enum BoundPat {
    Any,
    Exact(u32),
    AtLeast(u32),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BoundPatRaw {
    Word(String),
    Exact { eq: u32 },
    AtLeast { ge: u32 },
}

impl TryFrom<BoundPatRaw> for BoundPat {
    type Error = String;
    fn try_from(raw: BoundPatRaw) -> Result<Self, String> {
        match raw {
            BoundPatRaw::Word(w) if w == "any" => Ok(BoundPat::Any),
            BoundPatRaw::Word(w) => Err(format!("unknown bound pattern {w:?}")),
            BoundPatRaw::Exact { eq } => Ok(BoundPat::Exact(eq)),
            BoundPatRaw::AtLeast { ge } => Ok(BoundPat::AtLeast(ge)),
        }
    }
}

impl BoundPat {
    fn matches(&self, value: u32) -> bool {
        match *self {
            BoundPat::Any => true,
            BoundPat::Exact(v) => value == v,
            BoundPat::AtLeast(v) => value >= v,
        }
    }
}

impl Default for BoundPat {
    fn default() -> Self {
        BoundPat::Any
    }
}

#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
enum PrimePat {
    Two,
    Three,
    Ge5,
    Odd,
    #[default]
    Any,
}

impl PrimePat {
    fn matches(&self, p: u64) -> bool {
        match self {
            PrimePat::Two => p == 2,
            PrimePat::Three => p == 3,
            PrimePat::Ge5 => p >= 5,
            PrimePat::Odd => p % 2 == 1,
            PrimePat::Any => true,
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
enum KindPat {
    Sphere,
    Moore,
    Chang,
}

#[derive(Clone, Debug, Deserialize)]
struct SpacePat {
    kind: KindPat,
    #[serde(default)]
    dim: BoundPat,
    #[serde(default)]
    prime: PrimePat,
    #[serde(default)]
    power: BoundPat,
}

impl SpacePat {
    fn matches(&self, space: &Space) -> bool {
        match (self.kind, space) {
            (KindPat::Sphere, Space::Sphere { dim }) => self.dim.matches(*dim),
            (KindPat::Chang, Space::Chang { dim }) => self.dim.matches(*dim),
            (KindPat::Moore, Space::Moore { dim, p, r }) => {
                self.dim.matches(*dim) && self.prime.matches(*p) && self.power.matches(*r)
            }
            _ => false,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
struct HomotopyRow {
    space: SpacePat,
    stem: i64,
    group: String,
    #[serde(default)]
    generators: Vec<String>,
    #[serde(default)]
    note: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
struct MapRow {
    source: SpacePat,
    target: SpacePat,
    codim: i64,
    group: String,
    #[serde(default)]
    generators: Vec<String>,
    #[serde(default)]
    note: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct HomotopyTable {
    #[serde(default, rename = "comment")]
    _comment: Option<String>,
    homotopy: Vec<HomotopyRow>,
    maps: Vec<MapRow>,
    relations: Vec<Relation>,
}

impl HomotopyTable {
    /// Parse a table from its JSON serialization.
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// The homotopy group `π_degree(space)`, if the table records it.
    pub fn homotopy_group(&self, space: &Space, degree: u32) -> Option<TableEntry> {
        let stem = degree as i64 - space.dim() as i64;
        let row = self
            .homotopy
            .iter()
            .find(|row| row.stem == stem && row.space.matches(space))?;
        Some(TableEntry {
            group: instantiate(&row.group, space.coefficient()),
            generators: row.generators.clone(),
            note: row.note.clone(),
        })
    }

    /// The group of based homotopy classes `[source, target]`, if recorded.
    pub fn mapping_group(&self, source: &Space, target: &Space) -> Option<TableEntry> {
        let codim = source.dim() as i64 - target.dim() as i64;
        let row = self.maps.iter().find(|row| {
            row.codim == codim && row.source.matches(source) && row.target.matches(target)
        })?;
        // A `q` in the group template refers to the Moore coefficient, and no
        // row involves two Moore spaces at once.
        let q = source.coefficient().or_else(|| target.coefficient());
        Some(TableEntry {
            group: instantiate(&row.group, q),
            generators: row.generators.clone(),
            note: row.note.clone(),
        })
    }

    /// All recorded generator relations.
    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }
}

/// The table compiled into the library.
pub fn builtin() -> &'static HomotopyTable {
    static TABLE: OnceLock<HomotopyTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        HomotopyTable::from_json(include_str!("../data/homotopy_tables.json"))
            .expect("built-in homotopy table is valid JSON")
    })
}

/// Evaluate a group template such as `"Z ⊕ Z/12"` or `"Z/gcd(3,q)"`, with
/// `q` the Moore coefficient of the matched space when one is present.
fn instantiate(template: &str, q: Option<u64>) -> FgAbGroup {
    let mut total = FgAbGroup::trivial();
    for part in template.split('⊕') {
        let part = part.trim();
        let summand = match part {
            "0" => FgAbGroup::trivial(),
            "Z" => FgAbGroup::free(1),
            _ => {
                let m = part
                    .strip_prefix("Z/")
                    .unwrap_or_else(|| panic!("unrecognized group template {part:?}"));
                let value = if m == "q" {
                    expect_q(q)
                } else if let Some(inner) = m.strip_prefix("gcd(").and_then(|s| s.strip_suffix(')'))
                {
                    let (lhs, rhs) = inner
                        .split_once(',')
                        .unwrap_or_else(|| panic!("malformed gcd template {part:?}"));
                    let lhs: u64 = lhs
                        .trim()
                        .parse()
                        .unwrap_or_else(|_| panic!("malformed gcd template {part:?}"));
                    assert_eq!(rhs.trim(), "q", "gcd template must be gcd(m,q)");
                    num_integer::gcd(lhs, expect_q(q))
                } else {
                    m.parse()
                        .unwrap_or_else(|_| panic!("unrecognized group template {part:?}"))
                };
                FgAbGroup::cyclic(value).expect("table coefficients factor")
            }
        };
        total = total.direct_sum(&summand);
    }
    total
}

fn expect_q(q: Option<u64>) -> u64 {
    q.expect("group template mentions q but the matched space has no Moore coefficient")
}
