//! Plain-text formats shared by the pipeline stages.
//!
//! * k-list: one decimal integer per line, strictly ascending, newline-terminated.
//! * generator file: `k <tag> <r> X1 Y1 Z1 ... Xr Yr Zr` per line, where the
//!   triples are projective points on the codomain named by `<tag>`; lines
//!   starting with `#` and blank lines are ignored.

use num_bigint::BigInt;

use crate::elliptic::{MwSubgroup, RationalPoint};
use crate::error::{Error, Result};
use crate::maps::CodomainTag;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn read_klist(text: &str) -> Result<Vec<u64>> {
    let mut out: Vec<u64> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let k: u64 = line.parse().map_err(|_| parse_err(i + 1, format!("not an integer: {line:?}")))?;
        if out.last().is_some_and(|&prev| prev >= k) {
            return Err(parse_err(i + 1, "k-list must be strictly ascending"));
        }
        out.push(k);
    }
    Ok(out)
}

pub fn write_klist(ks: &[u64]) -> String {
    let mut s = String::with_capacity(ks.len() * 10);
    for k in ks {
        s.push_str(&k.to_string());
        s.push('\n');
    }
    s
}

/// One line of a generator file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorRecord {
    pub k: u64,
    pub tag: CodomainTag,
    pub points: Vec<RationalPoint>,
}

impl GeneratorRecord {
    pub fn subgroup(&self) -> Result<MwSubgroup> {
        MwSubgroup::new(self.tag.coefficient(&BigInt::from(self.k)), self.points.clone())
    }

    pub fn to_line(&self) -> String {
        let mut s = format!("{} {} {}", self.k, self.tag, self.points.len());
        for p in &self.points {
            let (x, y, z) = p.coords();
            s.push_str(&format!(" {x} {y} {z}"));
        }
        s
    }
}

pub fn read_generators(text: &str) -> Result<Vec<GeneratorRecord>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let n = i + 1;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 3 {
            return Err(parse_err(n, "expected `k tag r` followed by r point triples"));
        }
        let k: u64 = fields[0].parse().map_err(|_| parse_err(n, "bad k"))?;
        let tag: CodomainTag = fields[1].parse().map_err(|e: Error| parse_err(n, e.to_string()))?;
        let r: usize = fields[2].parse().map_err(|_| parse_err(n, "bad rank"))?;
        if fields.len() != 3 + 3 * r {
            return Err(parse_err(n, format!("expected {} coordinates, found {}", 3 * r, fields.len() - 3)));
        }
        let ints = fields[3..]
            .iter()
            .map(|f| f.parse::<BigInt>().map_err(|_| parse_err(n, format!("bad coordinate {f:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let points = ints
            .chunks_exact(3)
            .map(|c| {
                RationalPoint::from_projective(c[0].clone(), c[1].clone(), c[2].clone())
                    .map_err(|e| parse_err(n, e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(GeneratorRecord { k, tag, points });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn klist_format() {
        assert_eq!(read_klist("2017\n2018\n").unwrap(), vec![2017, 2018]);
        assert_eq!(read_klist("").unwrap(), Vec::<u64>::new());
        assert_eq!(write_klist(&[1, 5]), "1\n5\n");
        assert!(matches!(read_klist("5\n3\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(read_klist("x\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn generator_format() {
        let text = "# comment\n\n138826 E4k 1 1428664419846 -17828809046227 13110866712\n";
        let recs = read_generators(text).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].tag, CodomainTag::E4k);
        assert_eq!(read_generators(&recs[0].to_line()).unwrap(), recs);
        assert_eq!(recs[0].subgroup().unwrap().rank(), 1);
        assert!(read_generators("65 E4k 1 1 2").is_err());
        assert!(read_generators("65 E9k 0").is_err());
        assert!(matches!(read_generators("#\n65 Ek 1 0 0 0"), Err(Error::Parse { line: 2, .. })));
        assert_eq!(read_generators("65 Ek 0").unwrap()[0].points.len(), 0);
    }
}
