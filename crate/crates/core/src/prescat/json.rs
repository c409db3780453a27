//! JSON files for categories, diagrams and diagram polynomials.
//!
//! Identities are implicit (named `id_<object>`) and never listed; actions
//! of non-identity morphisms are maps from element names to element names.

use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::{check_category, DiagMap, Diagram, FinCat, PshPolyRed};
use crate::error::{Error, Result};
use crate::fin::Fin;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryFile {
    pub objects: Vec<String>,
    /// Non-identity morphisms with their domain and codomain.
    #[serde(default)]
    pub homs: IndexMap<String, (String, String)>,
    /// Non-identity composites `(g, f, g∘f)`.
    #[serde(default)]
    pub composition: Vec<(String, String, String)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramBody {
    pub components: IndexMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub actions: IndexMap<String, IndexMap<String, String>>,
    /// For families over another diagram: each element's image, per object.
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub over: IndexMap<String, IndexMap<String, String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramFile {
    pub category: CategoryFile,
    pub components: IndexMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub actions: IndexMap<String, IndexMap<String, String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PshPolyFile {
    pub category: CategoryFile,
    /// Omitted: the terminal diagram.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<DiagramBody>,
    pub constructors: DiagramBody,
    pub arities: DiagramBody,
    /// Omitted entries are forced when the base component is a point.
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub reindex: IndexMap<String, IndexMap<String, String>>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub reductions: IndexMap<String, Vec<String>>,
}

pub fn category_from_file(file: &CategoryFile) -> Result<FinCat> {
    let objects = Fin::new(file.objects.iter().cloned())?;
    let mut homs = Vec::new();
    let mut names = Fin::default();
    for (name, (a, b)) in &file.homs {
        names.push(name.clone())?;
        homs.push((
            name.clone(),
            objects.lookup("object", a)?,
            objects.lookup("object", b)?,
        ));
    }
    let mut composites = Vec::new();
    for (g, f, gf) in &file.composition {
        let look = |n: &str| names.lookup("morphism", n);
        composites.push((look(g)?, look(f)?, look(gf)?));
    }
    let cat = FinCat::from_table(file.objects.iter().cloned(), homs, composites)?;
    let report = check_category(&cat);
    if !report.passes() {
        return Err(Error::malformed(format!("category laws: {report}")));
    }
    Ok(cat)
}

pub fn category_to_file(cat: &FinCat) -> CategoryFile {
    let name = |m: usize| cat.morphism(m).name.clone();
    let obj = |c: usize| cat.objects().name(c).to_string();
    CategoryFile {
        objects: cat.objects().names().to_vec(),
        homs: (0..cat.morphism_count())
            .filter(|&m| !cat.is_identity(m))
            .map(|m| (name(m), (obj(cat.dom(m)), obj(cat.cod(m)))))
            .collect(),
        composition: cat
            .composite_table()
            .into_iter()
            .map(|(g, f, gf)| (name(g), name(f), name(gf)))
            .collect(),
    }
}

pub(crate) fn diagram_from_parts(
    cat: Arc<FinCat>,
    components: &IndexMap<String, Vec<String>>,
    actions: &IndexMap<String, IndexMap<String, String>>,
) -> Result<Diagram> {
    let objects = cat.objects();
    for name in components.keys() {
        objects.lookup("object", name)?;
    }
    for name in actions.keys() {
        cat.morphism_index(name).ok_or_else(|| Error::UnknownName {
            kind: "morphism",
            name: name.clone(),
        })?;
    }
    let fins: Vec<Fin> = objects
        .names()
        .iter()
        .map(|o| Fin::new(components.get(o).cloned().unwrap_or_default()))
        .collect::<Result<_>>()?;
    let mut tables = Vec::with_capacity(cat.morphism_count());
    for m in 0..cat.morphism_count() {
        let (a, b) = (cat.dom(m), cat.cod(m));
        let mor = &cat.morphism(m).name;
        let given = actions.get(mor);
        if given.is_none() && (cat.is_identity(m) || fins[a].is_empty()) {
            tables.push((0..fins[a].len()).collect());
            continue;
        }
        let given = given.ok_or_else(|| Error::malformed(format!("no action for `{mor}`")))?;
        let mut table = Vec::with_capacity(fins[a].len());
        for e in fins[a].names() {
            let img = given
                .get(e)
                .ok_or_else(|| Error::malformed(format!("action of `{mor}` misses `{e}`")))?;
            table.push(fins[b].lookup("element", img)?);
        }
        if given.len() != table.len() {
            return Err(Error::malformed(format!("action of `{mor}` names unknown elements")));
        }
        tables.push(table);
    }
    let d = Diagram::new(cat, fins, tables)?;
    let report = super::check_diagram(&d);
    if !report.passes() {
        return Err(Error::malformed(format!("functor laws: {report}")));
    }
    Ok(d)
}

fn parts_of(d: &Diagram) -> (IndexMap<String, Vec<String>>, IndexMap<String, IndexMap<String, String>>) {
    let cat = &d.cat;
    let components = (0..cat.object_count())
        .map(|c| (cat.objects().name(c).to_string(), d.components[c].names().to_vec()))
        .collect();
    let actions = (0..cat.morphism_count())
        .filter(|&m| !cat.is_identity(m) && !d.components[cat.dom(m)].is_empty())
        .map(|m| {
            let (a, b) = (cat.dom(m), cat.cod(m));
            let table = (0..d.components[a].len())
                .map(|e| {
                    (
                        d.components[a].name(e).to_string(),
                        d.components[b].name(d.act(m, e)).to_string(),
                    )
                })
                .collect();
            (cat.morphism(m).name.clone(), table)
        })
        .collect();
    (components, actions)
}

pub(crate) fn map_from_over(
    src: &Diagram,
    tgt: &Diagram,
    over: &IndexMap<String, IndexMap<String, String>>,
    what: &str,
) -> Result<DiagMap> {
    let cat = &src.cat;
    for name in over.keys() {
        cat.objects().lookup("object", name)?;
    }
    let mut tables = Vec::new();
    for c in 0..cat.object_count() {
        let given = over.get(cat.objects().name(c));
        let mut table = Vec::new();
        for e in src.components[c].names() {
            let img = match given.and_then(|g| g.get(e)) {
                Some(name) => tgt.components[c].lookup("element", name)?,
                None if tgt.components[c].len() == 1 => 0,
                None => {
                    return Err(Error::malformed(format!(
                        "{what}: no image for `{e}` at `{}`",
                        cat.objects().name(c)
                    )))
                }
            };
            table.push(img);
        }
        tables.push(table);
    }
    Ok(DiagMap { tables })
}

fn over_of(src: &Diagram, tgt: &Diagram, m: &DiagMap) -> IndexMap<String, IndexMap<String, String>> {
    let cat = &src.cat;
    (0..cat.object_count())
        .filter(|&c| !src.components[c].is_empty())
        .map(|c| {
            let entries = (0..src.components[c].len())
                .map(|e| {
                    (
                        src.components[c].name(e).to_string(),
                        tgt.components[c].name(m.apply(c, e)).to_string(),
                    )
                })
                .collect();
            (cat.objects().name(c).to_string(), entries)
        })
        .collect()
}

pub fn parse_diagram(text: &str) -> Result<Diagram> {
    let file: DiagramFile = serde_json::from_str(text)?;
    let cat = Arc::new(category_from_file(&file.category)?);
    diagram_from_parts(cat, &file.components, &file.actions)
}

pub fn diagram_to_string(d: &Diagram) -> String {
    let (components, actions) = parts_of(d);
    let file = DiagramFile {
        category: category_to_file(&d.cat),
        components,
        actions,
    };
    serde_json::to_string_pretty(&file).expect("serializable") + "\n"
}

pub fn psh_from_file(file: &PshPolyFile) -> Result<PshPolyRed> {
    let cat = Arc::new(category_from_file(&file.category)?);
    let z = match &file.base {
        Some(b) => diagram_from_parts(cat.clone(), &b.components, &b.actions)?,
        None => Diagram::terminal(cat.clone()),
    };
    let y = diagram_from_parts(cat.clone(), &file.constructors.components, &file.constructors.actions)?;
    let x = diagram_from_parts(cat.clone(), &file.arities.components, &file.arities.actions)?;
    let g = map_from_over(&y, &z, &file.constructors.over, "constructors")?;
    let f = map_from_over(&x, &y, &file.arities.over, "arities")?;
    let h = map_from_over(&x, &z, &file.reindex, "reindex")?;

    for name in file.reductions.keys() {
        cat.objects().lookup("object", name)?;
    }
    let mut r_fins = Vec::new();
    let mut k_tables = Vec::new();
    for c in 0..cat.object_count() {
        let listed = file
            .reductions
            .get(cat.objects().name(c))
            .cloned()
            .unwrap_or_default();
        let mut members = listed
            .iter()
            .map(|n| x.components[c].lookup("arity element", n))
            .collect::<Result<Vec<_>>>()?;
        members.sort_unstable();
        members.dedup();
        r_fins.push(Fin::new(members.iter().map(|&e| x.components[c].name(e).to_string()))?);
        k_tables.push(members);
    }
    let mut r_actions = Vec::new();
    for m in 0..cat.morphism_count() {
        let (a, b) = (cat.dom(m), cat.cod(m));
        let mut table = Vec::new();
        for &e in &k_tables[a] {
            let img = x.act(m, e);
            let pos = k_tables[b].iter().position(|&t| t == img).ok_or_else(|| {
                Error::malformed(format!(
                    "reductions not closed under `{}`: `{}` leaves them",
                    cat.morphism(m).name,
                    x.components[a].name(e)
                ))
            })?;
            table.push(pos);
        }
        r_actions.push(table);
    }
    let r = Diagram::new(cat, r_fins, r_actions)?;
    PshPolyRed::new(z, y, x, r, g, f, DiagMap { tables: k_tables }, h)
}

pub fn parse_psh(text: &str) -> Result<PshPolyRed> {
    let file: PshPolyFile = serde_json::from_str(text)?;
    psh_from_file(&file)
}

pub fn psh_to_file(pp: &PshPolyRed) -> PshPolyFile {
    let body = |d: &Diagram, over| {
        let (components, actions) = parts_of(d);
        DiagramBody {
            components,
            actions,
            over,
        }
    };
    let cat = &pp.cat;
    let reductions = (0..cat.object_count())
        .filter(|&c| !pp.r.components[c].is_empty())
        .map(|c| {
            let xs = (0..pp.r.components[c].len())
                .map(|e| pp.x.components[c].name(pp.k.apply(c, e)).to_string())
                .collect();
            (cat.objects().name(c).to_string(), xs)
        })
        .collect();
    PshPolyFile {
        category: category_to_file(cat),
        base: Some(body(&pp.z, IndexMap::new())),
        constructors: body(&pp.y, over_of(&pp.y, &pp.z, &pp.g)),
        arities: body(&pp.x, over_of(&pp.x, &pp.y, &pp.f)),
        reindex: over_of(&pp.x, &pp.z, &pp.h),
        reductions,
    }
}

pub fn psh_to_string(pp: &PshPolyRed) -> String {
    serde_json::to_string_pretty(&psh_to_file(pp)).expect("serializable") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prescat::check_diagram;

    const ARROW_DIAGRAM: &str = r#"{
  "category": {"objects": ["c", "d"], "homs": {"sigma": ["c", "d"]}},
  "components": {"c": ["p"], "d": ["q0", "q1"]},
  "actions": {"sigma": {"p": "q1"}}
}"#;

    #[test]
    fn diagram_round_trip() {
        let d = parse_diagram(ARROW_DIAGRAM).unwrap();
        assert!(check_diagram(&d).passes());
        assert_eq!(d.act(2, 0), 1);
        let text = diagram_to_string(&d);
        let again = parse_diagram(&text).unwrap();
        assert_eq!(again.components, d.components);
        assert_eq!(again.actions, d.actions);
        assert_eq!(diagram_to_string(&again), text);
    }

    #[test]
    fn bad_composition_rejected() {
        let text = r#"{
  "category": {"objects": ["x"], "homs": {"e": ["x", "x"]}},
  "components": {"x": []}
}"#;
        assert!(parse_diagram(text).is_err());
        let text = r#"{
  "category": {"objects": ["x"], "homs": {"e": ["x", "x"]}, "composition": [["e", "e", "e"]]},
  "components": {"x": ["u", "v"]},
  "actions": {"e": {"u": "v", "v": "u"}}
}"#;
        // a swap is not idempotent
        assert!(parse_diagram(text).is_err());
    }

    #[test]
    fn psh_round_trip_and_closure() {
        let text = r#"{
  "category": {"objects": ["c", "d"], "homs": {"sigma": ["c", "d"]}},
  "constructors": {"components": {"c": ["y"], "d": ["y'", "b"]}, "actions": {"sigma": {"y": "y'"}}},
  "arities": {"components": {"d": ["x'"]}, "over": {"d": {"x'": "y'"}}},
  "reductions": {"d": ["x'"]}
}"#;
        let pp = parse_psh(text).unwrap();
        assert!(pp.check_locally_decidable());
        assert_eq!(pp.reduction_place(1, 0), Some(0));
        let out = psh_to_string(&pp);
        let again = parse_psh(&out).unwrap();
        assert_eq!(psh_to_string(&again), out);

        let open = r#"{
  "category": {"objects": ["c", "d"], "homs": {"sigma": ["c", "d"]}},
  "constructors": {"components": {"c": ["y"], "d": ["y"]}, "actions": {"sigma": {"y": "y"}}},
  "arities": {"components": {"c": ["x"], "d": ["x"]}, "actions": {"sigma": {"x": "x"}}, "over": {"c": {"x": "y"}, "d": {"x": "y"}}},
  "reductions": {"c": ["x"]}
}"#;
        assert!(parse_psh(open).is_err());
    }
}
