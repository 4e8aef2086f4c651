//! `--N` values: a comma list (`50,100,200`), an inclusive range
//! (`8..=12`), or a geometric range (`8..=128 x2`).

use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NList(pub Vec<u32>);

impl FromStr for NList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let values = if let Some((start, rest)) = s.split_once("..=") {
            let start = parse_n(start)?;
            let (end, factor) = match rest.split_once('x') {
                Some((end, k)) => (parse_n(end)?, Some(parse_n(k)?)),
                None => (parse_n(rest)?, None),
            };
            if end < start {
                return Err(format!("empty range {start}..={end}"));
            }
            match factor {
                Some(k) if k < 2 => return Err("geometric factor must be at least 2".into()),
                Some(k) => {
                    let mut v = Vec::new();
                    let mut n = start as u64;
                    while n <= end as u64 {
                        v.push(n as u32);
                        n *= k as u64;
                    }
                    v
                }
                None => (start..=end).collect(),
            }
        } else {
            s.split(',').map(parse_n).collect::<Result<Vec<_>, _>>()?
        };
        if values.is_empty() {
            return Err("no values given".into());
        }
        Ok(NList(values))
    }
}

fn parse_n(s: &str) -> Result<u32, String> {
    let s = s.trim();
    let n: u32 = s.parse().map_err(|_| format!("`{s}` is not a positive integer"))?;
    if n == 0 {
        return Err("N must be positive".into());
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!("50,100, 200".parse::<NList>().unwrap().0, vec![50, 100, 200]);
        assert_eq!("8..=128 x2".parse::<NList>().unwrap().0, vec![8, 16, 32, 64, 128]);
        assert_eq!("10..=100x3".parse::<NList>().unwrap().0, vec![10, 30, 90]);
        assert_eq!("3..=5".parse::<NList>().unwrap().0, vec![3, 4, 5]);
        assert_eq!("7".parse::<NList>().unwrap().0, vec![7]);
    }

    #[test]
    fn rejects() {
        for bad in ["", "a", "5..=3", "1..=9 x1", "0,4", "4,,5"] {
            assert!(bad.parse::<NList>().is_err(), "{bad}");
        }
    }
}
