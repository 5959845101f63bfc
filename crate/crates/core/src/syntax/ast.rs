use std::borrow::Borrow;
use std::fmt;
use std::sync::Arc;

/// An interned-ish identifier. Cloning is a reference-count bump.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: impl AsRef<str>) -> Self {
        Name(Arc::from(s.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

impl From<String> for Name {
    fn from(s: String) -> Self {
        Name(Arc::from(s))
    }
}

impl std::ops::Deref for Name {
    type Target = str;

    fn deref(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for Name {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl serde::Serialize for Name {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> serde::Deserialize<'de> for Name {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d).map(Name::from)
    }
}

/// The two disjoint halves of the domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Realm {
    Classic,
    Host,
}

impl fmt::Display for Realm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Realm::Classic => "classic",
            Realm::Host => "host",
        })
    }
}

/// A literal from the host language. Identity is the literal itself, so
/// `2` and `2.0` are different values.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HostValue {
    Integer(i64),
    /// Decimal literal, kept as written.
    Decimal(Name),
    Str(Name),
}

impl HostValue {
    /// Name of the most specific built-in host type of this literal.
    pub fn type_name(&self) -> &'static str {
        match self {
            HostValue::Integer(_) => crate::lattice::INTEGER,
            HostValue::Decimal(_) => crate::lattice::REAL,
            HostValue::Str(_) => crate::lattice::STRING,
        }
    }
}

impl fmt::Display for HostValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HostValue::Integer(i) => write!(f, "{i}"),
            HostValue::Decimal(d) => write!(f, "{d}"),
            HostValue::Str(s) => {
                f.write_str("\"")?;
                for c in s.as_str().chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        '\n' => f.write_str("\\n")?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str("\"")
            }
        }
    }
}

/// An individual named in a description: either a classic individual or a
/// host value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Individual {
    Classic(Name),
    Host(HostValue),
}

impl Individual {
    pub fn classic(name: &str) -> Self {
        Individual::Classic(Name::new(name))
    }

    pub fn int(v: i64) -> Self {
        Individual::Host(HostValue::Integer(v))
    }

    pub fn string(s: &str) -> Self {
        Individual::Host(HostValue::Str(Name::new(s)))
    }

    pub fn realm(&self) -> Realm {
        match self {
            Individual::Classic(_) => Realm::Classic,
            Individual::Host(_) => Realm::Host,
        }
    }

    pub fn is_host(&self) -> bool {
        matches!(self, Individual::Host(_))
    }
}

impl fmt::Display for Individual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Individual::Classic(n) => write!(f, "{n}"),
            Individual::Host(v) => write!(f, "{v}"),
        }
    }
}

/// Parse tree of a description.
///
/// `Named` and `Primitive` only occur before expansion against a knowledge
/// base; the graph translation rejects them.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Description {
    Thing,
    ClassicThing,
    HostThing,
    Nothing,
    /// Atomic classic concept.
    Concept(Name),
    /// Pre-defined host type from the host lattice.
    HostConcept(Name),
    /// Conjunction of at least two descriptions.
    And(Vec<Description>),
    AllRole(Name, Box<Description>),
    AllAttr(Name, Box<Description>),
    /// At least `n` (≥ 1) fillers for a role.
    AtLeast(u32, Name),
    /// At most `m` fillers for a role.
    AtMost(u32, Name),
    /// Equality of two non-empty attribute chains.
    SameAs(Vec<Name>, Vec<Name>),
    FillsRole(Name, Individual),
    FillsAttr(Name, Individual),
    /// Non-empty, realm-homogeneous set of individuals.
    OneOf(Vec<Individual>),
    Primitive(Box<Description>, Name),
    /// Black-box host-language predicate; treated as an opaque atom.
    Test(Name, Realm),
    /// Reference to a named concept of the knowledge base.
    Named(Name),
}

impl Description {
    pub fn concept(name: &str) -> Self {
        Description::Concept(Name::new(name))
    }

    pub fn and(parts: impl IntoIterator<Item = Description>) -> Self {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                Description::And(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Description::Thing,
            1 => flat.pop().unwrap(),
            _ => Description::And(flat),
        }
    }

    pub fn all_role(role: &str, d: Description) -> Self {
        Description::AllRole(Name::new(role), Box::new(d))
    }

    pub fn all_attr(attr: &str, d: Description) -> Self {
        Description::AllAttr(Name::new(attr), Box::new(d))
    }

    pub fn at_least(n: u32, role: &str) -> Self {
        Description::AtLeast(n, Name::new(role))
    }

    pub fn at_most(n: u32, role: &str) -> Self {
        Description::AtMost(n, Name::new(role))
    }

    pub fn same_as(a: &[&str], b: &[&str]) -> Self {
        Description::SameAs(
            a.iter().copied().map(Name::new).collect(),
            b.iter().copied().map(Name::new).collect(),
        )
    }

    /// Number of constructor occurrences, counting every name and literal
    /// as one.
    pub fn size(&self) -> usize {
        match self {
            Description::And(ds) => 1 + ds.iter().map(Description::size).sum::<usize>(),
            Description::AllRole(_, d) | Description::AllAttr(_, d) => 2 + d.size(),
            Description::Primitive(d, _) => 2 + d.size(),
            Description::AtLeast(..) | Description::AtMost(..) => 3,
            Description::SameAs(a, b) => 1 + a.len() + b.len(),
            Description::FillsRole(..) | Description::FillsAttr(..) | Description::Test(..) => 3,
            Description::OneOf(ls) => 1 + ls.len(),
            _ => 1,
        }
    }

    /// Maximum nesting depth of restrictions.
    pub fn depth(&self) -> usize {
        match self {
            Description::And(ds) => ds.iter().map(Description::depth).max().unwrap_or(0),
            Description::AllRole(_, d) | Description::AllAttr(_, d) => 1 + d.depth(),
            Description::Primitive(d, _) => d.depth(),
            _ => 0,
        }
    }

    /// Which realm the extension is confined to, decided syntactically.
    pub fn realm(&self) -> RealmHint {
        use Description::*;
        match self {
            Thing => RealmHint::Both,
            Nothing => RealmHint::Empty,
            HostThing | HostConcept(_) => RealmHint::Host,
            Test(_, Realm::Host) => RealmHint::Host,
            OneOf(ls) => match ls.first() {
                Some(Individual::Host(_)) => RealmHint::Host,
                _ => RealmHint::Classic,
            },
            And(ds) => ds.iter().fold(RealmHint::Both, |acc, d| acc.meet(d.realm())),
            Primitive(d, _) => RealmHint::Classic.meet(d.realm()),
            // Named concepts are expanded before anyone asks.
            Named(_) => RealmHint::Both,
            _ => RealmHint::Classic,
        }
    }

    pub(crate) fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Description)) {
        f(self);
        match self {
            Description::And(ds) => ds.iter().for_each(|d| d.visit(f)),
            Description::AllRole(_, d) | Description::AllAttr(_, d) | Description::Primitive(d, _) => d.visit(f),
            _ => {}
        }
    }
}

/// Syntactic realm classification of a description's extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RealmHint {
    /// May contain elements of both realms (only THING-like descriptions).
    Both,
    Classic,
    Host,
    /// Provably empty.
    Empty,
}

impl RealmHint {
    fn meet(self, other: RealmHint) -> RealmHint {
        use RealmHint::*;
        match (self, other) {
            (Empty, _) | (_, Empty) => Empty,
            (Both, x) | (x, Both) => x,
            (Classic, Classic) => Classic,
            (Host, Host) => Host,
            _ => Empty,
        }
    }
}

impl fmt::Display for Description {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
            for (i, it) in items.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{it}")?;
            }
            Ok(())
        }
        match self {
            Description::Thing => f.write_str("thing"),
            Description::ClassicThing => f.write_str("classic-thing"),
            Description::HostThing => f.write_str("host-thing"),
            Description::Nothing => f.write_str("nothing"),
            Description::Concept(n) | Description::HostConcept(n) | Description::Named(n) => {
                write!(f, "{n}")
            }
            Description::And(ds) => {
                f.write_str("and(")?;
                list(f, ds)?;
                f.write_str(")")
            }
            Description::AllRole(p, d) | Description::AllAttr(p, d) => write!(f, "all({p},{d})"),
            Description::AtLeast(n, r) => write!(f, "at-least({n},{r})"),
            Description::AtMost(n, r) => write!(f, "at-most({n},{r})"),
            Description::SameAs(a, b) => {
                f.write_str("same-as((")?;
                list(f, a)?;
                f.write_str("),(")?;
                list(f, b)?;
                f.write_str("))")
            }
            Description::FillsRole(p, l) | Description::FillsAttr(p, l) => write!(f, "fills({p},{l})"),
            Description::OneOf(ls) => {
                f.write_str("one-of(")?;
                list(f, ls)?;
                f.write_str(")")
            }
            Description::Primitive(d, t) => write!(f, "primitive({d},{t})"),
            Description::Test(fun, realm) => write!(f, "test({fun},{realm})"),
        }
    }
}
