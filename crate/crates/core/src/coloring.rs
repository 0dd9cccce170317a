//! Locally injective vertex functions ("colorings") with exact rational
//! values.

use std::collections::BTreeMap;

use num::rational::Ratio;
use num::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// Exact rational scalar used for function values, level parameters and
/// indices.
pub type Rational = Ratio<i64>;

/// Renders a rational canonically: plain integer when the denominator is 1,
/// otherwise `p/q` in lowest terms with the sign on the numerator.
pub fn rational_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `-p` or `p/q`.
pub fn rational_from_str(s: &str) -> Result<Rational> {
    let parse_int = |t: &str| -> Result<i64> {
        t.trim()
            .parse::<i64>()
            .map_err(|_| Error::MalformedColoring(format!("invalid rational `{s}`")))
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let denom = parse_int(q)?;
            if denom == 0 {
                return Err(Error::MalformedColoring(format!("zero denominator in `{s}`")));
            }
            Ok(Rational::new(parse_int(p)?, denom))
        }
    }
}

/// A vertex → rational map. Operations that need local injectivity or
/// totality validate against their host graph on entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    values: BTreeMap<VertexId, Rational>,
}

impl Coloring {
    pub fn new(values: impl IntoIterator<Item = (VertexId, Rational)>) -> Coloring {
        Coloring {
            values: values.into_iter().collect(),
        }
    }

    pub fn get(&self, v: &VertexId) -> Option<Rational> {
        self.values.get(v).copied()
    }

    pub fn value(&self, v: &VertexId) -> Result<Rational> {
        self.get(v).ok_or_else(|| Error::MissingValue(v.clone()))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Checks totality on `g` and local injectivity (distinct values across
    /// every edge); reports the offending edge otherwise.
    pub fn validate_for(&self, g: &Graph) -> Result<()> {
        for v in g.vertices() {
            if !self.values.contains_key(v) {
                return Err(Error::MissingValue(v.clone()));
            }
        }
        for (a, b) in g.edges() {
            if self.values[&a] == self.values[&b] {
                return Err(Error::NotLocallyInjective(a, b));
            }
        }
        Ok(())
    }

    /// The same function with every value negated.
    pub fn negated(&self) -> Coloring {
        Coloring {
            values: self
                .values
                .iter()
                .map(|(v, r)| (v.clone(), -r))
                .collect(),
        }
    }

    /// Sorted distinct values taken on the vertices of `g`.
    pub fn sorted_values_on(&self, g: &Graph) -> Result<Vec<Rational>> {
        let mut vals = Vec::with_capacity(g.vertex_count());
        for v in g.vertices() {
            vals.push(self.value(v)?);
        }
        vals.sort();
        vals.dedup();
        Ok(vals)
    }

    /// Midpoints between consecutive distinct values on `g`; these are the
    /// regular level parameters used for foliations.
    pub fn gap_midpoints_on(&self, g: &Graph) -> Result<Vec<Rational>> {
        let vals = self.sorted_values_on(g)?;
        Ok(vals
            .windows(2)
            .map(|w| (w[0] + w[1]) / Rational::from_integer(2))
            .collect())
    }

    /// Coloring assigning `k` to the `k`-th vertex of `order` (0-based).
    pub fn from_order(order: &[VertexId]) -> Coloring {
        Coloring {
            values: order
                .iter()
                .enumerate()
                .map(|(k, v)| (v.clone(), Rational::from_integer(k as i64)))
                .collect(),
        }
    }

    /// Uniformly random total order of the vertices of `g`, realized as the
    /// distinct integers 1..=n.
    pub fn random(g: &Graph, rng: &mut impl Rng) -> Coloring {
        let mut values: Vec<i64> = (1..=g.vertex_count() as i64).collect();
        values.shuffle(rng);
        Coloring {
            values: g
                .vertices()
                .iter()
                .zip(values)
                .map(|(v, k)| (v.clone(), Rational::from_integer(k)))
                .collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VertexId, &Rational)> {
        self.values.iter()
    }

    // ---- serialization ----

    pub fn from_json_str(s: &str) -> Result<Coloring> {
        let raw: ColoringJson = serde_json::from_str(s)?;
        let mut values = BTreeMap::new();
        for (k, v) in raw.values {
            values.insert(VertexId::new(k), rational_from_str(&v)?);
        }
        Ok(Coloring { values })
    }

    pub fn to_json_string(&self) -> String {
        let raw = ColoringJson {
            values: self
                .values
                .iter()
                .map(|(v, r)| (v.as_str().to_owned(), rational_to_string(r)))
                .collect(),
        };
        serde_json::to_string(&raw).expect("coloring serialization cannot fail")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ColoringJson {
    values: BTreeMap<String, String>,
}

/// Sign of `r - c`, used when slicing simplices by a level value.
pub(crate) fn sign_against(r: &Rational, c: &Rational) -> i8 {
    let d = r - c;
    if d.is_zero() {
        0
    } else if d.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings_round_trip() {
        for s in ["0", "-1", "3/2", "-7/3", "42"] {
            let r = rational_from_str(s).unwrap();
            assert_eq!(rational_to_string(&r), s);
        }
        assert_eq!(
            rational_to_string(&rational_from_str("4/2").unwrap()),
            "2"
        );
        assert!(rational_from_str("1/0").is_err());
        assert!(rational_from_str("x").is_err());
    }

    #[test]
    fn validation_reports_offending_edge() {
        let g = Graph::new(
            [VertexId::new("a"), VertexId::new("b")],
            [(VertexId::new("a"), VertexId::new("b"))],
        )
        .unwrap();
        let f = Coloring::new([
            (VertexId::new("a"), Rational::from_integer(1)),
            (VertexId::new("b"), Rational::from_integer(1)),
        ]);
        match f.validate_for(&g) {
            Err(Error::NotLocallyInjective(a, b)) => {
                assert_eq!((a.as_str(), b.as_str()), ("a", "b"));
            }
            other => panic!("expected NotLocallyInjective, got {other:?}"),
        }
        let partial = Coloring::new([(VertexId::new("a"), Rational::from_integer(1))]);
        assert!(matches!(
            partial.validate_for(&g),
            Err(Error::MissingValue(_))
        ));
    }

    #[test]
    fn midpoints_are_exact() {
        let g = Graph::new([VertexId::new("a"), VertexId::new("b")], []).unwrap();
        let f = Coloring::new([
            (VertexId::new("a"), Rational::from_integer(0)),
            (VertexId::new("b"), Rational::from_integer(1)),
        ]);
        assert_eq!(
            f.gap_midpoints_on(&g).unwrap(),
            vec![Rational::new(1, 2)]
        );
    }

    #[test]
    fn coloring_json_round_trip() {
        let f = Coloring::new([
            (VertexId::new("a"), Rational::new(3, 2)),
            (VertexId::new("b"), Rational::from_integer(-1)),
        ]);
        let s = f.to_json_string();
        assert_eq!(s, r#"{"values":{"a":"3/2","b":"-1"}}"#);
        assert_eq!(Coloring::from_json_str(&s).unwrap(), f);
    }
}
