//! Family sources: `green:l`, `kk:n`, `empty:n`, `random:n,m,(k_1,…,k_m),seed`,
//! `glued:m,pool,seed` or a path to a family JSON file.

use std::path::Path;

use twosimple::curve::random_glued_family;
use twosimple::family::{green_family, kk_family, random_family, Family};

use crate::CliError;

fn number<T: std::str::FromStr>(s: &str, what: &str) -> Result<T, CliError> {
    s.trim().parse().map_err(|_| CliError::Input(format!("{what}: cannot parse {s:?} as an integer")))
}

fn parse_random(body: &str) -> Result<Family, CliError> {
    let (n, m, kseq, seed) = match (body.find('('), body.find(')')) {
        (Some(open), Some(close)) if open < close => {
            let head: Vec<&str> = body[..open].split(',').collect();
            let tail = body[close + 1..].trim_start_matches(',');
            if head.len() != 3 || !head[2].trim().is_empty() {
                return Err(CliError::Input(format!("random family {body:?}: expected n,m,(k..),seed")));
            }
            let inner = body[open + 1..close].trim();
            let kseq: Vec<usize> = if inner.is_empty() {
                Vec::new()
            } else {
                inner.split(',').map(|k| number(k, "k")).collect::<Result<_, _>>()?
            };
            (number::<usize>(head[0], "n")?, number::<usize>(head[1], "m")?, kseq, number::<u64>(tail, "seed")?)
        }
        (None, None) => {
            let parts: Vec<&str> = body.split(',').collect();
            if parts.len() != 4 {
                return Err(CliError::Input(format!("random family {body:?}: expected n,m,k,seed or n,m,(k..),seed")));
            }
            let m: usize = number(parts[1], "m")?;
            (number(parts[0], "n")?, m, vec![number(parts[2], "k")?; m], number(parts[3], "seed")?)
        }
        _ => return Err(CliError::Input(format!("random family {body:?}: unbalanced parentheses"))),
    };
    if kseq.len() != m {
        return Err(CliError::Input(format!("random family: m = {m} but {} dimensions were given", kseq.len())));
    }
    Ok(random_family(n, &kseq, seed)?)
}

/// Resolves a family source string.
pub fn parse_family(src: &str) -> Result<Family, CliError> {
    let named = src.split_once(':').filter(|(name, _)| ["green", "kk", "empty", "random", "glued"].contains(name));
    match named {
        Some(("green", l)) => Ok(green_family(number(l, "l")?)?),
        Some(("kk", n)) => Ok(kk_family(number(n, "n")?)?),
        Some(("empty", n)) => Ok(Family::empty(number(n, "n")?)),
        Some(("random", body)) => parse_random(body),
        Some(("glued", body)) => {
            let parts: Vec<&str> = body.split(',').collect();
            if parts.len() != 3 {
                return Err(CliError::Input(format!("glued family {body:?}: expected m,pool,seed")));
            }
            Ok(random_glued_family(number(parts[0], "m")?, number(parts[1], "pool")?, number(parts[2], "seed")?)?)
        }
        _ => {
            let path = Path::new(src);
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {src}: {e}")))?;
            Ok(Family::from_json_str(&text)?)
        }
    }
}

/// Comma-separated integers, e.g. `0,1,-2`; the empty string is the empty list.
pub fn parse_ints(s: &str, what: &str) -> Result<Vec<i64>, CliError> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| number(x, what)).collect()
}
