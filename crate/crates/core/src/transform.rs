//! Full and partial transformations of a finite set `{1, ..., n}`.
//!
//! Transformations act on the right: `i(t1 t2) = (i t1) t2`, so
//! [`Transformation::compose`] applies `self` first and its argument second.
//! A transformation is identified with its image vector; equality and ordering
//! are those of the vector (lexicographic), with the undefined marker of a
//! partial map sorting after every state.
//!
//! The text form is a bracketed, comma-separated list of 1-based images, with
//! `_` standing for an undefined image: `[2,3,_]`. Whitespace is ignored.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest set size for which the algebra is exercised by the test suite.
pub const MAX_DEGREE: usize = 12;

/// Largest set size accepted by [`enumerate_aperiodic`].
pub const MAX_ENUMERATION_DEGREE: usize = 7;

const UNDEFINED: u16 = u16::MAX;

/// A 1-based state label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct StateId(u32);

impl StateId {
    /// Creates a state label; `value` must be at least 1.
    pub fn new(value: usize) -> Result<Self> {
        if value == 0 || value > u32::MAX as usize {
            return Err(Error::ImageOutOfRange { image: value as i64, n: 0 });
        }
        Ok(StateId(value as u32))
    }

    /// Label of the state with 0-based index `index`.
    pub fn from_index(index: usize) -> Self {
        StateId(index as u32 + 1)
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }

    /// 0-based index of this state.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Operations shared by full and partial transformations.
///
/// Semigroup closure, monotonicity search and the automata module are generic
/// over this trait.
pub trait Transform: Clone + Eq + Ord + Hash + fmt::Display + fmt::Debug + Send + Sync {
    /// Size `n` of the underlying set.
    fn degree(&self) -> usize;

    /// Image of the 0-based state `i`, or `None` when undefined.
    fn image(&self, i: usize) -> Option<usize>;

    fn identity(n: usize) -> Self;

    /// Left-to-right product `self` then `other`.
    ///
    /// Panics if the degrees differ; use the checked inherent `compose`
    /// methods when the inputs are not already known to agree.
    fn product(&self, other: &Self) -> Self;

    /// True iff the map has no cycle of length at least 2.
    fn is_aperiodic(&self) -> bool {
        let n = self.degree();
        for start in 0..n {
            let mut x = start;
            for step in 1..=n {
                match self.image(x) {
                    None => break,
                    Some(next) => x = next,
                }
                if x == start {
                    if step >= 2 {
                        return false;
                    }
                    break;
                }
            }
        }
        true
    }

    fn is_identity(&self) -> bool {
        (0..self.degree()).all(|i| self.image(i) == Some(i))
    }
}

fn product_images(left: &[u16], right: &[u16]) -> Vec<u16> {
    assert_eq!(left.len(), right.len(), "product of transformations of different degree");
    left.iter()
        .map(|&x| if x == UNDEFINED { UNDEFINED } else { right[x as usize] })
        .collect()
}

fn check_degree(n: usize) -> Result<()> {
    if n == 0 || n >= UNDEFINED as usize {
        return Err(Error::OutOfRange { what: "degree", value: n });
    }
    Ok(())
}

/// A total map of `{1, ..., n}` into itself.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transformation {
    images: Vec<u16>,
}

impl Transformation {
    /// Builds a transformation from its 1-based image vector.
    pub fn new(images: &[usize]) -> Result<Self> {
        let n = images.len();
        check_degree(n)?;
        let images = images
            .iter()
            .map(|&i| {
                if i == 0 || i > n {
                    Err(Error::ImageOutOfRange { image: i as i64, n })
                } else {
                    Ok((i - 1) as u16)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Transformation { images })
    }

    /// Builds a transformation from 0-based images. Panics on out-of-range input.
    pub fn from_indices(images: &[usize]) -> Self {
        let n = images.len();
        assert!(n > 0 && images.iter().all(|&i| i < n), "image out of range");
        Transformation { images: images.iter().map(|&i| i as u16).collect() }
    }

    /// The constant map `Q -> j` (1-based `j`).
    pub fn constant(n: usize, j: usize) -> Result<Self> {
        Transformation::new(&vec![j; n])
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 0-based state `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    /// 0-based image vector.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|&i| i as usize)
    }

    /// 1-based image vector.
    pub fn to_vec(&self) -> Vec<usize> {
        self.indices().map(|i| i + 1).collect()
    }

    /// `self` then `other`; errors when the degrees differ.
    pub fn compose(&self, other: &Transformation) -> Result<Transformation> {
        if self.degree() != other.degree() {
            return Err(Error::SizeMismatch { left: self.degree(), right: other.degree() });
        }
        Ok(self.product(other))
    }

    pub fn is_constant(&self) -> bool {
        self.images.windows(2).all(|w| w[0] == w[1])
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.degree()];
        for &i in &self.images {
            if std::mem::replace(&mut seen[i as usize], true) {
                return false;
            }
        }
        true
    }

    /// Conjugate `p^-1 t p` by a permutation of the states (0-based `perm`):
    /// state `perm[i]` maps to `perm[i t]`.
    pub fn conjugate(&self, perm: &[usize]) -> Transformation {
        let mut images = vec![0u16; self.degree()];
        for (i, &img) in self.images.iter().enumerate() {
            images[perm[i]] = perm[img as usize] as u16;
        }
        Transformation { images }
    }

    /// The forest whose roots are the fixed points and where every other
    /// node's parent is its image. Fails if `self` has a non-trivial cycle.
    pub fn to_forest(&self) -> Result<Forest> {
        if !self.is_aperiodic() {
            return Err(Error::NotAperiodic(self.to_string()));
        }
        let parent = self
            .indices()
            .enumerate()
            .map(|(node, img)| if img == node { None } else { Some(img) })
            .collect();
        Ok(Forest { parent })
    }
}

impl Transform for Transformation {
    fn degree(&self) -> usize {
        self.images.len()
    }

    fn image(&self, i: usize) -> Option<usize> {
        Some(self.images[i] as usize)
    }

    fn identity(n: usize) -> Self {
        Transformation { images: (0..n as u16).collect() }
    }

    fn product(&self, other: &Self) -> Self {
        Transformation { images: product_images(&self.images, &other.images) }
    }
}

/// A partial map of `{1, ..., n}` into itself.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialTransformation {
    images: Vec<u16>,
}

impl PartialTransformation {
    /// Builds a partial transformation from 1-based images, `None` = undefined.
    pub fn new(images: &[Option<usize>]) -> Result<Self> {
        let n = images.len();
        check_degree(n)?;
        let images = images
            .iter()
            .map(|image| match *image {
                None => Ok(UNDEFINED),
                Some(i) if i == 0 || i > n => Err(Error::ImageOutOfRange { image: i as i64, n }),
                Some(i) => Ok((i - 1) as u16),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PartialTransformation { images })
    }

    /// Builds a partial transformation from 0-based images. Panics on out-of-range input.
    pub fn from_indices(images: &[Option<usize>]) -> Self {
        let n = images.len();
        assert!(n > 0);
        let images = images
            .iter()
            .map(|image| match *image {
                None => UNDEFINED,
                Some(i) => {
                    assert!(i < n, "image out of range");
                    i as u16
                }
            })
            .collect();
        PartialTransformation { images }
    }

    /// The nowhere-defined map.
    pub fn empty(n: usize) -> Self {
        PartialTransformation { images: vec![UNDEFINED; n] }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 0-based state `i`.
    pub fn apply(&self, i: usize) -> Option<usize> {
        match self.images[i] {
            UNDEFINED => None,
            x => Some(x as usize),
        }
    }

    /// 1-based images, `None` = undefined.
    pub fn to_vec(&self) -> Vec<Option<usize>> {
        (0..self.degree()).map(|i| self.apply(i).map(|x| x + 1)).collect()
    }

    /// `self` then `other`; errors when the degrees differ.
    pub fn compose(&self, other: &PartialTransformation) -> Result<PartialTransformation> {
        if self.degree() != other.degree() {
            return Err(Error::SizeMismatch { left: self.degree(), right: other.degree() });
        }
        Ok(self.product(other))
    }

    /// 0-based states with a defined image.
    pub fn domain(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&i| self.images[i] != UNDEFINED).collect()
    }

    /// Sorted, deduplicated 0-based images of the domain.
    pub fn image_set(&self) -> Vec<usize> {
        let mut img: Vec<usize> = self.images.iter().filter(|&&x| x != UNDEFINED).map(|&x| x as usize).collect();
        img.sort_unstable();
        img.dedup();
        img
    }

    pub fn is_total(&self) -> bool {
        !self.images.contains(&UNDEFINED)
    }

    pub fn to_total(&self) -> Option<Transformation> {
        self.is_total().then(|| Transformation { images: self.images.clone() })
    }

    /// Total map on `n + 1` states: undefined images go to the new state
    /// `n + 1`, which is fixed.
    pub fn complete(&self) -> Transformation {
        let sink = self.degree() as u16;
        let mut images: Vec<u16> = self.images.iter().map(|&x| if x == UNDEFINED { sink } else { x }).collect();
        images.push(sink);
        Transformation { images }
    }
}

impl Transform for PartialTransformation {
    fn degree(&self) -> usize {
        self.images.len()
    }

    fn image(&self, i: usize) -> Option<usize> {
        self.apply(i)
    }

    fn identity(n: usize) -> Self {
        PartialTransformation { images: (0..n as u16).collect() }
    }

    fn product(&self, other: &Self) -> Self {
        PartialTransformation { images: product_images(&self.images, &other.images) }
    }
}

impl From<Transformation> for PartialTransformation {
    fn from(t: Transformation) -> Self {
        PartialTransformation { images: t.images }
    }
}

impl TryFrom<PartialTransformation> for Transformation {
    type Error = Error;

    fn try_from(t: PartialTransformation) -> Result<Self> {
        t.to_total().ok_or_else(|| Error::NotTotal(t.to_string()))
    }
}

fn write_images(f: &mut fmt::Formatter<'_>, images: &[u16]) -> fmt::Result {
    f.write_str("[")?;
    for (k, &x) in images.iter().enumerate() {
        if k > 0 {
            f.write_str(",")?;
        }
        if x == UNDEFINED {
            f.write_str("_")?;
        } else {
            write!(f, "{}", x + 1)?;
        }
    }
    f.write_str("]")
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_images(f, &self.images)
    }
}

impl fmt::Debug for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_images(f, &self.images)
    }
}

impl fmt::Display for PartialTransformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_images(f, &self.images)
    }
}

impl fmt::Debug for PartialTransformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_images(f, &self.images)
    }
}

fn parse_tokens(text: &str) -> Result<Vec<Option<usize>>> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = compact
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::Malformed(format!("expected `[...]`, got `{text}`")))?;
    if inner.is_empty() {
        return Err(Error::Malformed("no images".into()));
    }
    let tokens: Vec<&str> = inner.split(',').collect();
    let n = tokens.len();
    tokens
        .into_iter()
        .map(|tok| {
            if tok == "_" {
                return Ok(None);
            }
            let value: i64 = tok.parse().map_err(|_| Error::Malformed(format!("bad token `{tok}`")))?;
            if value < 1 || value > n as i64 {
                return Err(Error::ImageOutOfRange { image: value, n });
            }
            Ok(Some(value as usize))
        })
        .collect()
}

impl FromStr for PartialTransformation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PartialTransformation::new(&parse_tokens(s)?)
    }
}

impl FromStr for Transformation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tokens = parse_tokens(s)?;
        let images = tokens
            .into_iter()
            .map(|t| t.ok_or_else(|| Error::NotTotal(s.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Transformation::new(&images)
    }
}

/// A labeled forest on nodes `{1, ..., n}`, given by parent pointers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Forest {
    parent: Vec<Option<usize>>,
}

impl Forest {
    /// Builds a forest from 1-based parent labels, `None` marking a root.
    pub fn new(parents: &[Option<usize>]) -> Result<Self> {
        let n = parents.len();
        check_degree(n)?;
        let parent = parents
            .iter()
            .map(|p| match *p {
                None => Ok(None),
                Some(x) if x == 0 || x > n => Err(Error::ImageOutOfRange { image: x as i64, n }),
                Some(x) => Ok(Some(x - 1)),
            })
            .collect::<Result<Vec<_>>>()?;
        // Every node must reach a root within n steps.
        for start in 0..n {
            let mut node = start;
            let mut steps = 0;
            while let Some(p) = parent[node] {
                node = p;
                steps += 1;
                if steps > n {
                    return Err(Error::Malformed("parent relation has a cycle".into()));
                }
            }
        }
        Ok(Forest { parent })
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// 0-based parent of a 0-based node.
    pub fn parent(&self, node: usize) -> Option<usize> {
        self.parent[node]
    }

    /// Maps every node to its parent and every root to itself.
    pub fn to_transformation(&self) -> Transformation {
        let images: Vec<usize> =
            self.parent.iter().enumerate().map(|(node, p)| p.unwrap_or(node)).collect();
        Transformation::from_indices(&images)
    }
}

macro_rules! text_serde {
    ($ty:ty) => {
        impl serde::Serialize for $ty {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> serde::Deserialize<'de> for $ty {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let text = String::deserialize(d)?;
                text.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

// serialized in their text form, "[2,3,_]"
text_serde!(Transformation);
text_serde!(PartialTransformation);

/// All aperiodic transformations of `{1, ..., n}` in lexicographic order of
/// their image vectors.
pub fn enumerate_aperiodic(n: usize) -> Result<Vec<Transformation>> {
    if n == 0 || n > MAX_ENUMERATION_DEGREE {
        return Err(Error::OutOfRange { what: "enumeration degree", value: n });
    }
    let mut out = Vec::new();
    let mut images = vec![0u16; n];
    loop {
        let t = Transformation { images: images.clone() };
        if t.is_aperiodic() {
            out.push(t);
        }
        // odometer, last position fastest
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            images[pos] += 1;
            if (images[pos] as usize) < n {
                break;
            }
            images[pos] = 0;
        }
    }
}

/// All full transformations of `{1, ..., n}` in lexicographic order.
pub fn enumerate_all(n: usize) -> Result<Vec<Transformation>> {
    if n == 0 || n > MAX_ENUMERATION_DEGREE {
        return Err(Error::OutOfRange { what: "enumeration degree", value: n });
    }
    let total = n.pow(n as u32);
    Ok((0..total)
        .map(|mut code| {
            let mut images = vec![0u16; n];
            for slot in images.iter_mut().rev() {
                *slot = (code % n) as u16;
                code /= n;
            }
            Transformation { images }
        })
        .collect())
}
