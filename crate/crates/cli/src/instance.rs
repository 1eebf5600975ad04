//! Instance description files.
//!
//! ```text
//! # comments and blank lines are ignored
//! cap = 65536
//! family = finset-disjoint N=6
//! set A = {1}, {2,3}
//! set S = all
//! seq f = [ {1}, {2}, {3} ]
//! pool P = f, [ {4}, {5}, {6} ]
//! ```
//!
//! Family specs: `table n=2 rows=0,1/1,-`, `cyclic n=5`,
//! `finset-disjoint N=6`, `finset-ordered D=0,1/2,1` (or `N=12` for
//! `1..12`), `words alphabet=ab N=3`, `identity(<spec>)` and
//! `product(<spec> ; <spec>)`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crich::literal::{self, Cursor};
use crich::psg::DEFAULT_UNIVERSE_CAP;
use crich::sequences::{self, Validation};
use crich::{ElemId, ElemSet, PsgError, PsgInstance, SeqPrefix};
use num_rational::Rational64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: prefix `{name}` has an undefined product over index set {h:?}")]
    InvalidPrefix {
        line: usize,
        name: String,
        h: Vec<usize>,
    },
    #[error("line {line}: unknown family `{name}`")]
    UnknownFamily { line: usize, name: String },
}

/// A loaded instance with its named sets and pools.
pub struct InstanceFile {
    pub psg: Arc<PsgInstance>,
    sets: BTreeMap<String, Vec<ElemId>>,
    seqs: BTreeMap<String, SeqPrefix>,
    pools: BTreeMap<String, Vec<SeqPrefix>>,
}

impl InstanceFile {
    pub fn set(&self, name: &str) -> Option<&[ElemId]> {
        self.sets.get(name).map(|v| v.as_slice())
    }

    pub fn set_as_elemset(&self, name: &str) -> Option<ElemSet> {
        self.set(name)
            .map(|ids| ElemSet::from_ids(self.psg.len(), ids.iter().copied()))
    }

    pub fn seq(&self, name: &str) -> Option<&SeqPrefix> {
        self.seqs.get(name)
    }

    pub fn pool(&self, name: &str) -> Option<&[SeqPrefix]> {
        self.pools.get(name).map(|v| v.as_slice())
    }

    pub fn set_names(&self) -> impl Iterator<Item = &str> {
        self.sets.keys().map(|s| s.as_str())
    }

    pub fn pool_names(&self) -> impl Iterator<Item = &str> {
        self.pools.keys().map(|s| s.as_str())
    }
}

pub fn load_instance_file(path: &Path) -> Result<InstanceFile, InstanceError> {
    let src = std::fs::read_to_string(path).map_err(|source| InstanceError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_instance(&src)
}

fn perr(line: usize, msg: impl Into<String>) -> InstanceError {
    InstanceError::Parse {
        line,
        msg: msg.into(),
    }
}

fn psg_err(line: usize, e: PsgError) -> InstanceError {
    perr(line, e.to_string())
}

pub fn parse_instance(src: &str) -> Result<InstanceFile, InstanceError> {
    let mut cap = DEFAULT_UNIVERSE_CAP;
    let mut psg: Option<Arc<PsgInstance>> = None;
    let mut sets = BTreeMap::new();
    let mut seqs = BTreeMap::new();
    let mut pools = BTreeMap::new();

    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let (head, body) = text
            .split_once('=')
            .ok_or_else(|| perr(line, "expected `key = value`"))?;
        let head: Vec<&str> = head.split_whitespace().collect();
        let body = body.trim();
        match head.as_slice() {
            ["cap"] => {
                if psg.is_some() {
                    return Err(perr(line, "cap must come before family"));
                }
                cap = body
                    .parse()
                    .map_err(|_| perr(line, format!("bad cap `{body}`")))?;
            }
            ["family"] => {
                if psg.is_some() {
                    return Err(perr(line, "family declared twice"));
                }
                psg = Some(Arc::new(parse_family(body, cap, line)?));
            }
            [kind @ ("set" | "seq" | "pool"), name] => {
                let s = psg
                    .as_ref()
                    .ok_or_else(|| perr(line, "family must be declared first"))?;
                let name = name.to_string();
                if sets.contains_key(&name) || seqs.contains_key(&name) || pools.contains_key(&name)
                {
                    return Err(perr(line, format!("name `{name}` declared twice")));
                }
                match *kind {
                    "set" => {
                        sets.insert(name, parse_set(s, body, line)?);
                    }
                    "seq" => {
                        let mut c = Cursor::new(body);
                        let f = parse_prefix(s, &mut c, &name, line)?;
                        if !c.at_end() {
                            return Err(perr(line, "trailing input after prefix"));
                        }
                        seqs.insert(name, f);
                    }
                    _ => {
                        let p = parse_pool(s, body, &seqs, &name, line)?;
                        pools.insert(name, p);
                    }
                }
            }
            _ => {
                return Err(perr(
                    line,
                    format!("unknown declaration `{}`", head.join(" ")),
                ))
            }
        }
    }
    let psg = psg.ok_or_else(|| perr(src.lines().count().max(1), "no family declared"))?;
    Ok(InstanceFile {
        psg,
        sets,
        seqs,
        pools,
    })
}

/// Splits `product(a ; b)` / `identity(a)` bodies; `None` for plain specs.
fn strip_call<'a>(spec: &'a str, name: &str) -> Option<&'a str> {
    spec.strip_prefix(name)?
        .trim_start()
        .strip_prefix('(')?
        .strip_suffix(')')
}

fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut depth = 0i32;
    let mut start = 0;
    let mut out = Vec::new();
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

pub fn parse_family(spec: &str, cap: usize, line: usize) -> Result<PsgInstance, InstanceError> {
    let spec = spec.trim();
    if let Some(inner) = strip_call(spec, "product") {
        let parts = split_top_level(inner, ';');
        let [l, r] = parts.as_slice() else {
            return Err(perr(line, "product takes two specs separated by `;`"));
        };
        let l = Arc::new(parse_family(l, cap, line)?);
        let r = Arc::new(parse_family(r, cap, line)?);
        return PsgInstance::product_with_cap(&l, &r, cap).map_err(|e| psg_err(line, e));
    }
    if let Some(inner) = strip_call(spec, "identity") {
        let base = Arc::new(parse_family(inner, cap, line)?);
        return PsgInstance::adjoin_identity_with_cap(&base, cap).map_err(|e| psg_err(line, e));
    }
    let mut words = spec.split_whitespace();
    let name = words
        .next()
        .ok_or_else(|| perr(line, "empty family spec"))?;
    let mut params = BTreeMap::new();
    for w in words {
        let (k, v) = w
            .split_once('=')
            .ok_or_else(|| perr(line, format!("expected key=value, got `{w}`")))?;
        params.insert(k, v);
    }
    let get = |k: &str| {
        params
            .get(k)
            .copied()
            .ok_or_else(|| perr(line, format!("{name} needs `{k}=`")))
    };
    let int = |k: &str| -> Result<u32, InstanceError> {
        let v = get(k)?;
        v.parse()
            .map_err(|_| perr(line, format!("bad integer `{v}` for {k}")))
    };
    let built = match name {
        "finset-disjoint" => PsgInstance::finset_disjoint_with_cap(int("N")?, cap),
        "finset-ordered" => {
            let points: Vec<Rational64> = if params.contains_key("D") {
                get("D")?
                    .split(',')
                    .map(|p| {
                        p.parse()
                            .map_err(|_| perr(line, format!("bad rational `{p}`")))
                    })
                    .collect::<Result<_, _>>()?
            } else {
                (1..=int("N")? as i64)
                    .map(Rational64::from_integer)
                    .collect()
            };
            PsgInstance::finset_ordered_with_cap(points, cap)
        }
        "words" => {
            PsgInstance::located_words_with_cap(get("alphabet")?.chars().collect(), int("N")?, cap)
        }
        "cyclic" => {
            let n = int("n")?;
            if n as usize > cap {
                return Err(perr(
                    line,
                    format!("universe of {n} elements exceeds cap {cap}"),
                ));
            }
            PsgInstance::cyclic_group(n)
        }
        "table" => {
            let n = int("n")?;
            let entries = get("rows")?
                .split(['/', ','])
                .map(|x| match x.trim() {
                    "-" => Ok(None),
                    v => v
                        .parse()
                        .map(Some)
                        .map_err(|_| perr(line, format!("bad table entry `{v}`"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            PsgInstance::from_table_with_cap(n, entries, cap)
        }
        _ => {
            return Err(InstanceError::UnknownFamily {
                line,
                name: name.to_string(),
            })
        }
    };
    built.map_err(|e| psg_err(line, e))
}

fn parse_set(psg: &PsgInstance, body: &str, line: usize) -> Result<Vec<ElemId>, InstanceError> {
    match body {
        "all" => return Ok(psg.ids().collect()),
        "empty" => return Ok(Vec::new()),
        _ => {}
    }
    let mut c = Cursor::new(body);
    let mut out = Vec::new();
    loop {
        let lit = c.literal().map_err(|e| perr(line, e.to_string()))?;
        out.push(literal::resolve(psg, &lit).map_err(|e| perr(line, e.to_string()))?);
        if c.at_end() {
            break;
        }
        c.expect(b',').map_err(|e| perr(line, e.to_string()))?;
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn parse_prefix(
    psg: &PsgInstance,
    c: &mut Cursor,
    name: &str,
    line: usize,
) -> Result<SeqPrefix, InstanceError> {
    c.expect(b'[').map_err(|e| perr(line, e.to_string()))?;
    let mut vals = Vec::new();
    if !c.eat(b']') {
        loop {
            let lit = c.literal().map_err(|e| perr(line, e.to_string()))?;
            vals.push(literal::resolve(psg, &lit).map_err(|e| perr(line, e.to_string()))?);
            if c.eat(b']') {
                break;
            }
            c.expect(b',').map_err(|e| perr(line, e.to_string()))?;
        }
    }
    if vals.is_empty() {
        return Err(perr(line, format!("prefix `{name}` is empty")));
    }
    match sequences::validate_prefix(psg, &vals, sequences::DEFAULT_LENGTH_CAP) {
        Ok(Validation::Ok) => SeqPrefix::new(psg, vals).map_err(|e| perr(line, e.to_string())),
        Ok(Validation::Violation(h)) => Err(InstanceError::InvalidPrefix {
            line,
            name: name.to_string(),
            h,
        }),
        Err(e) => Err(perr(line, e.to_string())),
    }
}

fn parse_pool(
    psg: &PsgInstance,
    body: &str,
    seqs: &BTreeMap<String, SeqPrefix>,
    name: &str,
    line: usize,
) -> Result<Vec<SeqPrefix>, InstanceError> {
    split_top_level(body, ',')
        .into_iter()
        .enumerate()
        .map(|(i, item)| {
            let item = item.trim();
            if item.starts_with('[') {
                let mut c = Cursor::new(item);
                let f = parse_prefix(psg, &mut c, &format!("{name}[{i}]"), line)?;
                if !c.at_end() {
                    return Err(perr(line, "trailing input after prefix"));
                }
                Ok(f)
            } else {
                seqs.get(item).cloned().ok_or_else(|| {
                    perr(
                        line,
                        format!("undeclared sequence `{item}` in pool `{name}`"),
                    )
                })
            }
        })
        .collect()
}
