//! Subtype forest over the pre-defined host concepts.
//!
//! Host types must be disjoint unless one is a subtype of the other, so the
//! order is a forest: every type has at most one parent. Literal typing is
//! fixed: integer literals are `INTEGER`, decimal literals `REAL`, string
//! literals `STRING`.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::syntax::{HostValue, Name};

pub const INTEGER: &str = "INTEGER";
pub const REAL: &str = "REAL";
pub const COMPLEX: &str = "COMPLEX";
pub const NUMBER: &str = "NUMBER";
pub const STRING: &str = "STRING";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HostLattice {
    parent: BTreeMap<Name, Option<Name>>,
}

impl Default for HostLattice {
    /// `STRING`, and the chain `INTEGER ⊑ REAL ⊑ COMPLEX ⊑ NUMBER`.
    fn default() -> Self {
        let mut parent = BTreeMap::new();
        parent.insert(Name::new(NUMBER), None);
        parent.insert(Name::new(COMPLEX), Some(Name::new(NUMBER)));
        parent.insert(Name::new(REAL), Some(Name::new(COMPLEX)));
        parent.insert(Name::new(INTEGER), Some(Name::new(REAL)));
        parent.insert(Name::new(STRING), None);
        HostLattice { parent }
    }
}

impl HostLattice {
    /// Declares a host type. Re-declaring with the same parent is a no-op;
    /// a different parent would make the type overlap two incomparable
    /// types and is rejected.
    pub fn declare(&mut self, name: Name, parent: Option<Name>) -> Result<(), Error> {
        if let Some(p) = &parent {
            if !self.parent.contains_key(p) {
                return Err(Error::UnknownHostType(p.clone()));
            }
            if *p == name {
                return Err(Error::HostLatticeOverlap(name));
            }
        }
        match self.parent.get(&name) {
            Some(existing) if *existing == parent => Ok(()),
            Some(_) => Err(Error::HostLatticeOverlap(name)),
            None => {
                self.parent.insert(name, parent);
                Ok(())
            }
        }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.parent.contains_key(name)
    }

    pub fn types(&self) -> impl Iterator<Item = &Name> {
        self.parent.keys()
    }

    /// The type itself followed by all its strict supertypes, most specific
    /// first.
    pub fn ancestors<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Name> + 'a {
        let start = self.parent.get_key_value(name).map(|(k, _)| k);
        std::iter::successors(start, move |n| self.parent.get(n.as_str()).and_then(|p| p.as_ref()))
    }

    /// `sub ⊑ sup` in the subtype order (reflexive).
    pub fn is_subtype(&self, sub: &str, sup: &str) -> bool {
        self.ancestors(sub).any(|n| n.as_str() == sup)
    }

    pub fn related(&self, a: &str, b: &str) -> bool {
        self.is_subtype(a, b) || self.is_subtype(b, a)
    }

    /// Whether a literal lies in the extension of host type `ty`.
    pub fn value_has_type(&self, v: &HostValue, ty: &str) -> bool {
        self.is_subtype(v.type_name(), ty)
    }

    /// All host types containing every one of `values`.
    pub fn common_types<'a>(&self, values: impl IntoIterator<Item = &'a HostValue>) -> Vec<Name> {
        let mut iter = values.into_iter();
        let Some(first) = iter.next() else {
            return Vec::new();
        };
        let mut common: Vec<Name> = self.ancestors(first.type_name()).cloned().collect();
        for v in iter {
            common.retain(|t| self.value_has_type(v, t));
        }
        common
    }

    /// Most specific type among `names`, assuming they form a chain.
    pub fn most_specific<'a>(&self, names: impl IntoIterator<Item = &'a Name>) -> Option<Name> {
        let mut best: Option<&Name> = None;
        for n in names {
            best = match best {
                Some(b) if self.is_subtype(b, n) => Some(b),
                _ => Some(n),
            };
        }
        best.cloned()
    }
}
