//! JSON files for generating families, squares and vertical maps, over
//! finite sets or over a category.

use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::psh::{PshGenFamily, PshVerticalMap};
use super::{GenFamily, SquareGen, VerticalMap};
use crate::error::{Error, Result};
use crate::fin::{Fam, Fin};
use crate::per::{cover, TwoCoverBase};
use crate::poly::PolyRed;
use crate::prescat::json::{category_from_file, diagram_from_parts, map_from_over, CategoryFile, DiagramBody};
use crate::prescat::{Diagram, FinCat};

/// `codomains[i]` lists `V(i)`, `domains[i]` lists `U(i)`, and `maps`
/// sends each `u` to its `v`; it may be left out where `V(i)` is a point.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenLevel {
    pub codomains: IndexMap<String, Vec<String>>,
    #[serde(default)]
    pub domains: IndexMap<String, Vec<String>>,
    #[serde(default)]
    pub maps: IndexMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenFile {
    pub index: Vec<String>,
    #[serde(flatten)]
    pub level: GenLevel,
}

/// Two levels over one index with the maps between them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SquareFile {
    pub index: Vec<String>,
    pub level0: GenLevel,
    pub level1: GenLevel,
    pub on_codomains: IndexMap<String, String>,
    #[serde(default)]
    pub on_domains: IndexMap<String, String>,
}

/// `codomain[j]` lists `Y(j)`, `domain[y]` lists the `x` over `y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub index: Vec<String>,
    pub codomain: IndexMap<String, Vec<String>>,
    #[serde(default)]
    pub domain: IndexMap<String, Vec<String>>,
}

fn level(index: &Fin, l: &GenLevel) -> Result<GenFamily> {
    let mut cod = Fam::empty(index.len());
    for (i, vs) in &l.codomains {
        let i = index.lookup("index", i)?;
        for v in vs {
            cod.push(v.clone(), i)?;
        }
    }
    for k in l.domains.keys() {
        index.lookup("index", k)?;
    }
    for u in l.maps.keys() {
        if !l.domains.values().any(|us| us.contains(u)) {
            return Err(Error::UnknownName {
                kind: "domain element",
                name: u.clone(),
            });
        }
    }
    let mut dom = Fam::empty(cod.len());
    for (i_name, us) in &l.domains {
        let i = index.lookup("index", i_name)?;
        for u in us {
            let v = match l.maps.get(u) {
                Some(v) => cod.total().lookup("codomain element", v)?,
                None if cod.fibre(i).len() == 1 => cod.fibre(i)[0],
                None => return Err(Error::malformed(format!("no image for `{u}`"))),
            };
            if cod.over(v) != i {
                return Err(Error::malformed(format!("`{u}` maps outside index `{i_name}`")));
            }
            dom.push(u.clone(), v)?;
        }
    }
    GenFamily::new(index.clone(), cod, dom)
}

pub fn gen_from_file(file: &GenFile) -> Result<GenFamily> {
    level(&Fin::new(file.index.iter().cloned())?, &file.level)
}

pub fn parse_gen(text: &str) -> Result<GenFamily> {
    gen_from_file(&serde_json::from_str(text)?)
}

fn level_to_file(g: &GenFamily) -> GenLevel {
    let mut l = GenLevel::default();
    for i in 0..g.index.len() {
        let name = g.index.name(i).to_string();
        l.codomains.insert(name.clone(), g.v_of(i).iter().map(|&v| g.cod.name(v).to_string()).collect());
        let us = g.u_of(i);
        if !us.is_empty() {
            l.domains.insert(name, us.iter().map(|&u| g.dom.name(u).to_string()).collect());
        }
        for u in us {
            l.maps.insert(g.dom.name(u).to_string(), g.cod.name(g.dom.over(u)).to_string());
        }
    }
    l
}

pub fn gen_to_file(g: &GenFamily) -> GenFile {
    GenFile {
        index: g.index.names().to_vec(),
        level: level_to_file(g),
    }
}

pub fn square_from_file(file: &SquareFile) -> Result<SquareGen> {
    let index = Fin::new(file.index.iter().cloned())?;
    let (l0, l1) = (level(&index, &file.level0)?, level(&index, &file.level1)?);
    let on_cod = (0..l0.cod.len())
        .map(|v| {
            let img = file
                .on_codomains
                .get(l0.cod.name(v))
                .ok_or_else(|| Error::malformed(format!("no image for `{}`", l0.cod.name(v))))?;
            l1.cod.total().lookup("codomain element", img)
        })
        .collect::<Result<Vec<_>>>()?;
    let on_dom = (0..l0.dom.len())
        .map(|u| {
            let img = file
                .on_domains
                .get(l0.dom.name(u))
                .ok_or_else(|| Error::malformed(format!("no image for `{}`", l0.dom.name(u))))?;
            l1.dom.total().lookup("domain element", img)
        })
        .collect::<Result<Vec<_>>>()?;
    let sq = SquareGen {
        level0: l0,
        level1: l1,
        on_cod,
        on_dom,
    };
    sq.check()?;
    Ok(sq)
}

pub fn parse_square(text: &str) -> Result<SquareGen> {
    square_from_file(&serde_json::from_str(text)?)
}

/// Reads either a square or a single family, seen as its identity square.
pub fn parse_gen_or_square(text: &str) -> Result<SquareGen> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    if v.get("level0").is_some() {
        square_from_file(&serde_json::from_value(v)?)
    } else {
        Ok(gen_from_file(&serde_json::from_value(v)?)?.as_square())
    }
}

pub fn map_from_file(file: &MapFile) -> Result<VerticalMap> {
    let index = Fin::new(file.index.iter().cloned())?;
    let mut y = Fam::empty(index.len());
    for (j, ys) in &file.codomain {
        let j = index.lookup("index", j)?;
        for e in ys {
            y.push(e.clone(), j)?;
        }
    }
    let mut x = Fam::empty(y.len());
    for (e, xs) in &file.domain {
        let b = y.total().lookup("codomain element", e)?;
        for n in xs {
            x.push(n.clone(), b)?;
        }
    }
    VerticalMap::new(index, y, x)
}

pub fn parse_map(text: &str) -> Result<VerticalMap> {
    map_from_file(&serde_json::from_str(text)?)
}

pub fn map_to_file(f: &VerticalMap) -> MapFile {
    MapFile {
        index: f.index.names().to_vec(),
        codomain: (0..f.index.len())
            .map(|j| (f.index.name(j).to_string(), f.y.fibre(j).iter().map(|&e| f.y.name(e).to_string()).collect()))
            .collect(),
        domain: (0..f.y.len())
            .filter(|&e| !f.x.fibre(e).is_empty())
            .map(|e| (f.y.name(e).to_string(), f.x.fibre(e).iter().map(|&x| f.x.name(x).to_string()).collect()))
            .collect(),
    }
}

/// The polynomial with constructors `I` and arities `U`, whose cover
/// files describe 2-cover bases of `U -> I`.
pub fn cover_carrier(gen: &GenFamily) -> Result<PolyRed> {
    let point = Fin::new(["*"])?;
    let cons = Fam::new(1, gen.index.names().iter().map(|n| (n.clone(), 0)))?;
    let arity = gen.u_over_index()?;
    let reindex = vec![0; arity.len()];
    PolyRed::new(point, cons, arity, reindex, Fam::empty(gen.dom.len()))
}

/// A cover file keyed by index names, listing domain elements.
pub fn parse_gen_cover(text: &str, gen: &GenFamily) -> Result<TwoCoverBase> {
    cover::parse(text, &cover_carrier(gen)?)
}

/// Family over a category: `codomains.over` lands in `index`, and
/// `domains.over` in `codomains`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PshGenFile {
    pub category: CategoryFile,
    pub index: DiagramBody,
    pub codomains: DiagramBody,
    pub domains: DiagramBody,
}

/// Map over a category: `codomain.over` lands in `base`, `domain.over`
/// in `codomain`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PshMapFile {
    pub category: CategoryFile,
    pub base: DiagramBody,
    pub codomain: DiagramBody,
    #[serde(default)]
    pub domain: DiagramBody,
}

fn body(cat: &Arc<FinCat>, b: &DiagramBody) -> Result<Diagram> {
    diagram_from_parts(cat.clone(), &b.components, &b.actions)
}

pub fn psh_gen_from_file(file: &PshGenFile) -> Result<PshGenFamily> {
    let cat = Arc::new(category_from_file(&file.category)?);
    let index = body(&cat, &file.index)?;
    let cod = body(&cat, &file.codomains)?;
    let dom = body(&cat, &file.domains)?;
    let p = map_from_over(&cod, &index, &file.codomains.over, "codomains")?;
    let m = map_from_over(&dom, &cod, &file.domains.over, "domains")?;
    PshGenFamily::new(index, cod, dom, p, m)
}

pub fn psh_map_from_file(file: &PshMapFile, cat: Option<&Arc<FinCat>>) -> Result<PshVerticalMap> {
    let own = Arc::new(category_from_file(&file.category)?);
    let cat = match cat {
        Some(c) if c.same(&own) => c.clone(),
        Some(_) => return Err(Error::ShapeMismatch("family and map over different categories".into())),
        None => own,
    };
    let base = body(&cat, &file.base)?;
    let y = body(&cat, &file.codomain)?;
    let x = body(&cat, &file.domain)?;
    let q = map_from_over(&y, &base, &file.codomain.over, "codomain")?;
    let f = map_from_over(&x, &y, &file.domain.over, "domain")?;
    PshVerticalMap::new(base, y, x, q, f)
}

pub fn parse_psh_gen(text: &str) -> Result<PshGenFamily> {
    psh_gen_from_file(&serde_json::from_str(text)?)
}

pub fn parse_psh_map(text: &str, cat: Option<&Arc<FinCat>>) -> Result<PshVerticalMap> {
    psh_map_from_file(&serde_json::from_str(text)?, cat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn gen_round_trip() {
        for g in [fixtures::gen_pt(), fixtures::gen_id(), fixtures::gen_two()] {
            let text = serde_json::to_string(&gen_to_file(&g)).unwrap();
            assert_eq!(parse_gen(&text).unwrap(), g);
        }
    }

    #[test]
    fn map_round_trip() {
        let text = r#"{"index": ["j"], "codomain": {"j": ["y1", "y2"]}, "domain": {"y1": ["x1"]}}"#;
        let f = parse_map(text).unwrap();
        assert_eq!((f.y.len(), f.x.len()), (2, 1));
        let again = serde_json::to_string(&map_to_file(&f)).unwrap();
        assert_eq!(parse_map(&again).unwrap(), f);
    }

    #[test]
    fn square_file() {
        let text = r#"{
            "index": ["*"],
            "level0": {"codomains": {"*": ["pt"]}},
            "level1": {"codomains": {"*": ["pt"]}, "domains": {"*": ["u"]}},
            "on_codomains": {"pt": "pt"}
        }"#;
        assert_eq!(parse_gen_or_square(text).unwrap(), fixtures::square_empty_top());
        let bad = text.replace(r#""on_codomains": {"pt": "pt"}"#, r#""on_codomains": {}"#);
        assert!(parse_gen_or_square(&bad).is_err());
    }

    #[test]
    fn rejects_bad_maps() {
        let text = r#"{"index": ["a", "b"], "codomains": {"a": ["v"], "b": ["w"]}, "domains": {"a": ["u"]}, "maps": {"u": "w"}}"#;
        assert!(parse_gen(text).is_err());
        let text = r#"{"index": ["a"], "codomains": {"a": ["v", "w"]}, "domains": {"a": ["u"]}}"#;
        assert!(parse_gen(text).is_err());
    }

    #[test]
    fn cover_for_gen() {
        let g = fixtures::gen_two();
        let cb = parse_gen_cover(r#"{"*": {"covers": [["u1", "u2"], ["u2", "u1"]]}}"#, &g).unwrap();
        assert_eq!(cb.fibre_sizes, vec![2]);
    }
}
