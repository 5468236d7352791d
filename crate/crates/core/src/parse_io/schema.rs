//! JSON description files for algebras and derivations.

use std::fmt;
use std::marker::PhantomData;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use super::expr::{format_polynomial, parse_expression, ParseError};
use crate::algebra::{AlgebraError, Grading, PresentedAlgebra};
use crate::coeff::{Field, FieldError};
use crate::derivation::{Derivation, DerivationError};
use crate::groebner::MonomialOrder;
use crate::poly::{PolyRing, Polynomial};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{line}:{column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema: {0}")]
    Schema(String),
    #[error("{context}: {error}")]
    Parse { context: String, error: ParseError },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
}

impl From<serde_json::Error> for LoadError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        // serde_json appends " at line L column C"; keep only the cause
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        };
        LoadError::Json {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

/// String-keyed map that keeps insertion order and rejects duplicate keys
/// on input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedMap<V>(Vec<(String, V)>);

impl<V> Default for NamedMap<V> {
    fn default() -> Self {
        NamedMap(Vec::new())
    }
}

impl<V> NamedMap<V> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false (and leaves the map unchanged) if the key exists.
    pub fn insert(&mut self, key: impl Into<String>, value: V) -> bool {
        let key = key.into();
        if self.get(&key).is_some() {
            return false;
        }
        self.0.push((key, value));
        true
    }

    pub fn get(&self, key: &str) -> Option<&V> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &V)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|(k, _)| k.as_str())
    }
}

impl<K: Into<String>, V> FromIterator<(K, V)> for NamedMap<V> {
    fn from_iter<I: IntoIterator<Item = (K, V)>>(iter: I) -> Self {
        let mut m = NamedMap::new();
        for (k, v) in iter {
            m.insert(k, v);
        }
        m
    }
}

impl<V: Serialize> Serialize for NamedMap<V> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl<'de, V: Deserialize<'de>> Deserialize<'de> for NamedMap<V> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V_<V>(PhantomData<V>);
        impl<'de, V: Deserialize<'de>> Visitor<'de> for V_<V> {
            type Value = NamedMap<V>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object with unique keys")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut m = NamedMap::new();
                while let Some((k, v)) = access.next_entry::<String, V>()? {
                    if m.get(&k).is_some() {
                        return Err(serde::de::Error::custom(format!("duplicate key `{k}`")));
                    }
                    m.0.push((k, v));
                }
                Ok(m)
            }
        }
        deserializer.deserialize_map(V_(PhantomData))
    }
}

/// Monomial order as written in files: `"grevlex"`, `"lex"`, or
/// `{"eliminate": [names], "then": order}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OrderSpec {
    Named(String),
    Eliminate {
        eliminate: Vec<String>,
        then: Box<OrderSpec>,
    },
}

impl OrderSpec {
    pub fn from_order(order: &MonomialOrder, vars: &[String]) -> Self {
        match order {
            MonomialOrder::Lex => OrderSpec::Named("lex".into()),
            MonomialOrder::Grevlex => OrderSpec::Named("grevlex".into()),
            MonomialOrder::Elimination { block, rest } => OrderSpec::Eliminate {
                eliminate: block.iter().map(|&i| vars[i].clone()).collect(),
                then: Box::new(OrderSpec::from_order(rest, vars)),
            },
        }
    }

    pub fn resolve(&self, vars: &[String]) -> Result<MonomialOrder, LoadError> {
        match self {
            OrderSpec::Named(n) if n == "lex" => Ok(MonomialOrder::Lex),
            OrderSpec::Named(n) if n == "grevlex" => Ok(MonomialOrder::Grevlex),
            OrderSpec::Named(n) => Err(LoadError::Schema(format!("unknown monomial order `{n}`"))),
            OrderSpec::Eliminate { eliminate, then } => {
                let block = eliminate
                    .iter()
                    .map(|name| {
                        vars.iter()
                            .position(|v| v == name)
                            .ok_or_else(|| LoadError::Schema(format!("order eliminates unknown variable `{name}`")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(MonomialOrder::elimination(block, then.resolve(vars)?))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub field: String,
    pub variables: Vec<String>,
    pub relations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<OrderSpec>,
    #[serde(default, skip_serializing_if = "NamedMap::is_empty")]
    pub gradings: NamedMap<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "NamedMap::is_empty")]
    pub derivations: NamedMap<NamedMap<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivationFile {
    pub algebra: String,
    pub images: NamedMap<String>,
}

/// A parsed algebra file: the algebra, its gradings, and the parsed (not yet
/// checked) derivation images in variable order.
#[derive(Debug, Clone)]
pub struct LoadedAlgebra {
    pub algebra: Arc<PresentedAlgebra>,
    pub gradings: Vec<(String, Grading)>,
    pub derivations: Vec<(String, Vec<Polynomial>)>,
}

impl LoadedAlgebra {
    pub fn grading(&self, name: &str) -> Option<&Grading> {
        self.gradings.iter().find(|(n, _)| n == name).map(|(_, g)| g)
    }
}

fn validate_variable(name: &str) -> Result<(), LoadError> {
    if name.contains('@') {
        return Err(LoadError::Schema(format!("`{name}` is reserved for the field generator")));
    }
    let mut chars = name.chars();
    let ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
    if !ok {
        return Err(LoadError::Schema(format!("`{name}` is not a valid variable name")));
    }
    Ok(())
}

/// Parses an image map into variable order; every variable needs exactly
/// one entry.
pub fn parse_images(ring: &Arc<PolyRing>, images: &NamedMap<String>, context: &str) -> Result<Vec<Polynomial>, LoadError> {
    if let Some(k) = images.keys().find(|k| ring.index_of(k).is_none()) {
        return Err(LoadError::Schema(format!("{context}: image for unknown variable `{k}`")));
    }
    ring.vars()
        .iter()
        .map(|v| {
            let text = images
                .get(v)
                .ok_or_else(|| LoadError::Schema(format!("{context}: missing image for `{v}`")))?;
            parse_expression(text, ring).map_err(|error| LoadError::Parse {
                context: format!("{context}: image of {v}"),
                error,
            })
        })
        .collect()
}

pub fn format_images(d: &Derivation) -> NamedMap<String> {
    d.algebra()
        .vars()
        .iter()
        .zip(d.images())
        .map(|(v, f)| (v.clone(), format_polynomial(f)))
        .collect()
}

impl AlgebraFile {
    pub fn from_json(text: &str) -> Result<Self, LoadError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Canonical form: two-space indentation, LF line endings, trailing
    /// newline.
    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    pub fn from_algebra(a: &PresentedAlgebra) -> Self {
        let order = match a.order() {
            MonomialOrder::Grevlex => None,
            o => Some(OrderSpec::from_order(o, a.vars())),
        };
        AlgebraFile {
            field: a.field().descriptor(),
            variables: a.vars().to_vec(),
            relations: a.relations().iter().map(format_polynomial).collect(),
            order,
            gradings: NamedMap::new(),
            derivations: NamedMap::new(),
        }
    }

    pub fn with_grading(mut self, name: &str, g: &Grading) -> Self {
        self.gradings.insert(name, g.matrix());
        self
    }

    pub fn with_derivation(mut self, name: &str, d: &Derivation) -> Self {
        self.derivations.insert(name, format_images(d));
        self
    }

    pub fn build(&self) -> Result<LoadedAlgebra, LoadError> {
        let field = Field::parse(&self.field)?;
        for v in &self.variables {
            validate_variable(v)?;
        }
        let ring = PolyRing::new(field, self.variables.iter().cloned());
        let relations = self
            .relations
            .iter()
            .enumerate()
            .map(|(i, r)| {
                parse_expression(r, &ring).map_err(|error| LoadError::Parse {
                    context: format!("relation {}", i + 1),
                    error,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let order = match &self.order {
            Some(o) => o.resolve(&self.variables)?,
            None => MonomialOrder::Grevlex,
        };
        let algebra = PresentedAlgebra::with_order(&ring, relations, order)?;
        let gradings = self
            .gradings
            .iter()
            .map(|(name, m)| Ok((name.to_string(), algebra.attach_grading(m.clone())?)))
            .collect::<Result<Vec<_>, LoadError>>()?;
        let derivations = self
            .derivations
            .iter()
            .map(|(name, images)| Ok((name.to_string(), parse_images(&ring, images, &format!("derivation {name}"))?)))
            .collect::<Result<Vec<_>, LoadError>>()?;
        Ok(LoadedAlgebra {
            algebra,
            gradings,
            derivations,
        })
    }
}

impl DerivationFile {
    pub fn from_json(text: &str) -> Result<Self, LoadError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    pub fn from_derivation(d: &Derivation, algebra_path: &str) -> Self {
        DerivationFile {
            algebra: algebra_path.to_string(),
            images: format_images(d),
        }
    }
}

pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_algebra_file(path: impl AsRef<Path>) -> Result<LoadedAlgebra, LoadError> {
    AlgebraFile::from_json(&read(path.as_ref())?)?.build()
}

pub fn load_algebra(path: impl AsRef<Path>) -> Result<Arc<PresentedAlgebra>, LoadError> {
    Ok(load_algebra_file(path)?.algebra)
}

/// Loads and checks a derivation file against an already loaded algebra.
pub fn load_derivation(path: impl AsRef<Path>, algebra: &Arc<PresentedAlgebra>) -> Result<Derivation, LoadError> {
    let file = DerivationFile::from_json(&read(path.as_ref())?)?;
    let images = parse_images(algebra.ring(), &file.images, "derivation")?;
    Ok(Derivation::new(algebra, images)?)
}

/// Either kind of input file.
#[derive(Debug, Clone)]
pub enum Document {
    Algebra(LoadedAlgebra),
    /// A derivation file together with the algebra it refers to (resolved
    /// relative to the derivation file) and its parsed images.
    Derivation {
        algebra: LoadedAlgebra,
        images: Vec<Polynomial>,
    },
}

impl Document {
    pub fn algebra(&self) -> &LoadedAlgebra {
        match self {
            Document::Algebra(a) => a,
            Document::Derivation { algebra, .. } => algebra,
        }
    }
}

pub fn load_document(path: impl AsRef<Path>) -> Result<Document, LoadError> {
    let path = path.as_ref();
    let text = read(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let is_derivation = value.as_object().is_some_and(|o| o.contains_key("images"));
    if !is_derivation {
        return Ok(Document::Algebra(AlgebraFile::from_json(&text)?.build()?));
    }
    let file = DerivationFile::from_json(&text)?;
    let base = path.parent().unwrap_or(Path::new(""));
    let algebra = load_algebra_file(base.join(&file.algebra))?;
    let images = parse_images(algebra.algebra.ring(), &file.images, "derivation")?;
    Ok(Document::Derivation { algebra, images })
}
