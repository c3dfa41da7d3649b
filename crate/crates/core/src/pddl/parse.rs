use std::collections::{BTreeSet, HashMap};

use super::model::*;
use super::sexpr::{parse_single, syntax_error, SExpr};
use super::PddlError;

const SUPPORTED_REQUIREMENTS: &[&str] = &[":strips", ":typing"];

fn expect_list<'a>(e: &'a SExpr, what: &str) -> Result<&'a [SExpr], PddlError> {
    e.as_list()
        .ok_or_else(|| syntax_error(e.pos(), e.describe(), format!("expected {what}")))
}

fn expect_symbol<'a>(e: &'a SExpr, what: &str) -> Result<&'a str, PddlError> {
    e.as_symbol()
        .ok_or_else(|| syntax_error(e.pos(), e.describe(), format!("expected {what}")))
}

/// Splits `(define (<kind> name) section...)` into the name and its sections.
fn split_define<'a>(root: &'a SExpr, kind: &str) -> Result<(String, &'a [SExpr]), PddlError> {
    let items = expect_list(root, "(define ...)")?;
    match items.first().and_then(SExpr::as_symbol) {
        Some("define") => {}
        _ => return Err(syntax_error(root.pos(), root.describe(), "expected (define ...)")),
    }
    let header = items
        .get(1)
        .ok_or_else(|| syntax_error(root.pos(), "define", format!("missing ({kind} <name>)")))?;
    let hl = expect_list(header, &format!("({kind} <name>)"))?;
    if hl.len() != 2 || hl[0].as_symbol() != Some(kind) {
        return Err(syntax_error(
            header.pos(),
            header.describe(),
            format!("expected ({kind} <name>)"),
        ));
    }
    let name = expect_symbol(&hl[1], "a name")?.to_string();
    Ok((name, &items[2..]))
}

/// Parses `a b - t c` style lists. Variables keep their `?` stripped when
/// `vars` is set. Untyped entries default to `object`.
fn parse_typed_list(items: &[SExpr], vars: bool) -> Result<Vec<TypedName>, PddlError> {
    let mut out = Vec::new();
    let mut pending: Vec<String> = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let item = &items[i];
        let sym = expect_symbol(item, "a name")?;
        if sym == "-" {
            let ty_expr = items
                .get(i + 1)
                .ok_or_else(|| syntax_error(item.pos(), "-", "missing type after '-'"))?;
            if ty_expr.head() == Some("either") {
                return Err(PddlError::UnsupportedFeature("either-types".into()));
            }
            let ty = expect_symbol(ty_expr, "a type name")?;
            if pending.is_empty() {
                return Err(syntax_error(item.pos(), "-", "type annotation without names"));
            }
            for name in pending.drain(..) {
                out.push(TypedName::new(name, ty));
            }
            i += 2;
            continue;
        }
        let name = if vars {
            sym.strip_prefix('?')
                .ok_or_else(|| syntax_error(item.pos(), sym, "expected a ?variable"))?
        } else {
            if sym.starts_with('?') {
                return Err(syntax_error(item.pos(), sym, "unexpected variable"));
            }
            sym
        };
        pending.push(name.to_string());
        i += 1;
    }
    out.extend(pending.into_iter().map(|n| TypedName::new(n, ROOT_TYPE)));
    Ok(out)
}

fn check_requirements(items: &[SExpr]) -> Result<Vec<String>, PddlError> {
    let mut reqs = Vec::new();
    for r in items {
        let name = expect_symbol(r, "a requirement flag")?;
        if !SUPPORTED_REQUIREMENTS.contains(&name) {
            return Err(PddlError::UnsupportedFeature(name.to_string()));
        }
        reqs.push(name.to_string());
    }
    Ok(reqs)
}

fn unsupported_connective(head: &str) -> Option<&'static str> {
    Some(match head {
        "not" => ":negative-preconditions",
        "=" => ":equality",
        "or" | "imply" => ":disjunctive-preconditions",
        "exists" => ":existential-preconditions",
        "forall" => ":universal-preconditions",
        "when" => ":conditional-effects",
        "increase" | "decrease" | "assign" | "scale-up" | "scale-down" => ":action-costs",
        "<" | ">" | "<=" | ">=" => ":numeric-fluents",
        _ => return None,
    })
}

fn parse_lifted_atom(e: &SExpr) -> Result<Literal, PddlError> {
    let items = expect_list(e, "an atom")?;
    let head = items
        .first()
        .ok_or_else(|| syntax_error(e.pos(), "()", "empty atom"))?;
    let predicate = expect_symbol(head, "a predicate name")?;
    if let Some(feature) = unsupported_connective(predicate) {
        return Err(PddlError::UnsupportedFeature(feature.into()));
    }
    let args = items[1..]
        .iter()
        .map(|a| {
            let s = expect_symbol(a, "a term")?;
            Ok(match s.strip_prefix('?') {
                Some(v) => Term::Var(v.to_string()),
                None => Term::Const(s.to_string()),
            })
        })
        .collect::<Result<Vec<_>, PddlError>>()?;
    Ok(Literal {
        predicate: predicate.to_string(),
        args,
    })
}

/// Conjunction members: `(and a b)`, a single atom, or `()`.
fn conjuncts(e: &SExpr) -> Result<&[SExpr], PddlError> {
    let items = expect_list(e, "a formula")?;
    if items.is_empty() {
        return Ok(&[]);
    }
    if e.head() == Some("and") {
        Ok(&items[1..])
    } else {
        Ok(std::slice::from_ref(e))
    }
}

fn parse_precondition(e: &SExpr) -> Result<Vec<Literal>, PddlError> {
    conjuncts(e)?.iter().map(parse_lifted_atom).collect()
}

fn parse_effect(e: &SExpr) -> Result<(Vec<Literal>, Vec<Literal>), PddlError> {
    let mut add = Vec::new();
    let mut del = Vec::new();
    for c in conjuncts(e)? {
        if c.head() == Some("not") {
            let inner = expect_list(c, "(not <atom>)")?;
            if inner.len() != 2 {
                return Err(syntax_error(c.pos(), "not", "expected exactly one atom under not"));
            }
            del.push(parse_lifted_atom(&inner[1])?);
        } else if c.head() == Some("forall") {
            return Err(PddlError::UnsupportedFeature(":conditional-effects".into()));
        } else {
            add.push(parse_lifted_atom(c)?);
        }
    }
    Ok((add, del))
}

fn parse_action(items: &[SExpr], at: &SExpr) -> Result<ActionSchema, PddlError> {
    let name = expect_symbol(
        items
            .get(1)
            .ok_or_else(|| syntax_error(at.pos(), ":action", "missing action name"))?,
        "an action name",
    )?
    .to_string();
    let mut schema = ActionSchema {
        name,
        parameters: Vec::new(),
        precondition: Vec::new(),
        add_effects: Vec::new(),
        del_effects: Vec::new(),
    };
    let mut i = 2;
    while i < items.len() {
        let key = expect_symbol(&items[i], "an action keyword")?;
        let value = items
            .get(i + 1)
            .ok_or_else(|| syntax_error(items[i].pos(), key, "missing value"))?;
        match key {
            ":parameters" => schema.parameters = parse_typed_list(expect_list(value, "a parameter list")?, true)?,
            ":precondition" => schema.precondition = parse_precondition(value)?,
            ":effect" => (schema.add_effects, schema.del_effects) = parse_effect(value)?,
            other => return Err(syntax_error(items[i].pos(), other, "unknown action keyword")),
        }
        i += 2;
    }
    Ok(schema)
}

pub fn parse_domain(text: &str) -> Result<DomainModel, PddlError> {
    let root = parse_single(text)?;
    let (name, sections) = split_define(&root, "domain")?;
    let mut dom = DomainModel {
        name,
        requirements: Vec::new(),
        types: TypeHierarchy::default(),
        constants: Vec::new(),
        predicates: Vec::new(),
        schemas: Vec::new(),
    };
    for section in sections {
        let items = expect_list(section, "a domain section")?;
        let key = items
            .first()
            .and_then(SExpr::as_symbol)
            .ok_or_else(|| syntax_error(section.pos(), section.describe(), "expected a section keyword"))?;
        match key {
            ":requirements" => dom.requirements = check_requirements(&items[1..])?,
            ":types" => {
                for t in parse_typed_list(&items[1..], false)? {
                    dom.types.declare(t.name, t.ty);
                }
            }
            ":constants" => dom.constants = parse_typed_list(&items[1..], false)?,
            ":predicates" => {
                for p in &items[1..] {
                    let pl = expect_list(p, "a predicate declaration")?;
                    let pname = expect_symbol(
                        pl.first()
                            .ok_or_else(|| syntax_error(p.pos(), "()", "empty predicate declaration"))?,
                        "a predicate name",
                    )?;
                    dom.predicates.push(PredicateDecl {
                        name: pname.to_string(),
                        params: parse_typed_list(&pl[1..], true)?,
                    });
                }
            }
            ":action" => dom.schemas.push(parse_action(items, section)?),
            ":functions" => return Err(PddlError::UnsupportedFeature(":numeric-fluents".into())),
            ":derived" => return Err(PddlError::UnsupportedFeature(":derived-predicates".into())),
            ":durative-action" => return Err(PddlError::UnsupportedFeature(":durative-actions".into())),
            other => return Err(syntax_error(section.pos(), other, "unknown domain section")),
        }
    }
    validate_domain(&dom)?;
    Ok(dom)
}

fn validate_domain(dom: &DomainModel) -> Result<(), PddlError> {
    for (name, parent) in dom.types.declared() {
        if !dom.types.contains(parent) {
            return Err(PddlError::UnknownType(parent.clone()));
        }
        if !dom.types.is_subtype(name, ROOT_TYPE) || name == parent {
            return Err(PddlError::UnknownType(name.clone()));
        }
    }
    let mut seen = BTreeSet::new();
    for p in &dom.predicates {
        if !seen.insert(p.name.as_str()) {
            return Err(PddlError::DuplicatePredicate(p.name.clone()));
        }
        for param in &p.params {
            if !dom.types.contains(&param.ty) {
                return Err(PddlError::UnknownType(param.ty.clone()));
            }
        }
    }
    for c in &dom.constants {
        if !dom.types.contains(&c.ty) {
            return Err(PddlError::UnknownObjectType {
                object: c.name.clone(),
                ty: c.ty.clone(),
            });
        }
    }
    for s in &dom.schemas {
        for param in &s.parameters {
            if !dom.types.contains(&param.ty) {
                return Err(PddlError::UnknownType(param.ty.clone()));
            }
        }
        for lit in s.precondition.iter().chain(&s.add_effects).chain(&s.del_effects) {
            let decl = dom
                .predicate(&lit.predicate)
                .ok_or_else(|| PddlError::UnknownPredicate(lit.predicate.clone()))?;
            if decl.arity() != lit.args.len() {
                return Err(PddlError::ArityMismatch {
                    predicate: lit.predicate.clone(),
                    expected: decl.arity(),
                    found: lit.args.len(),
                });
            }
            for t in &lit.args {
                match t {
                    Term::Var(v) if !s.parameters.iter().any(|p| &p.name == v) => {
                        return Err(PddlError::UnboundVariable {
                            schema: s.name.clone(),
                            var: v.clone(),
                        })
                    }
                    Term::Const(c) if !dom.constants.iter().any(|k| &k.name == c) => {
                        return Err(PddlError::UnknownObject(c.clone()))
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(())
}

fn parse_ground_atom(e: &SExpr) -> Result<GroundAtom, PddlError> {
    let lit = parse_lifted_atom(e)?;
    let args = lit
        .args
        .into_iter()
        .map(|t| match t {
            Term::Const(c) => Ok(c),
            Term::Var(v) => Err(syntax_error(e.pos(), format!("?{v}"), "variables are not allowed in problem atoms")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GroundAtom {
        predicate: lit.predicate,
        args,
    })
}

pub fn parse_problem(text: &str, dom: &DomainModel) -> Result<InstanceModel, PddlError> {
    let root = parse_single(text)?;
    let (name, sections) = split_define(&root, "problem")?;
    let mut inst = InstanceModel {
        name,
        domain_name: dom.name.clone(),
        objects: Vec::new(),
        init: Vec::new(),
        goal: Vec::new(),
    };
    for section in sections {
        let items = expect_list(section, "a problem section")?;
        let key = items
            .first()
            .and_then(SExpr::as_symbol)
            .ok_or_else(|| syntax_error(section.pos(), section.describe(), "expected a section keyword"))?;
        match key {
            ":domain" => {
                let d = expect_symbol(
                    items
                        .get(1)
                        .ok_or_else(|| syntax_error(section.pos(), ":domain", "missing domain name"))?,
                    "a domain name",
                )?;
                if d != dom.name {
                    return Err(PddlError::DomainMismatch {
                        expected: dom.name.clone(),
                        found: d.to_string(),
                    });
                }
            }
            ":requirements" => {
                check_requirements(&items[1..])?;
            }
            ":objects" => inst.objects = parse_typed_list(&items[1..], false)?,
            ":init" => {
                inst.init = items[1..].iter().map(parse_ground_atom).collect::<Result<_, _>>()?;
            }
            ":goal" => {
                let g = items
                    .get(1)
                    .ok_or_else(|| syntax_error(section.pos(), ":goal", "missing goal formula"))?;
                inst.goal = conjuncts(g)?.iter().map(parse_ground_atom).collect::<Result<_, _>>()?;
            }
            ":metric" => return Err(PddlError::UnsupportedFeature(":action-costs".into())),
            other => return Err(syntax_error(section.pos(), other, "unknown problem section")),
        }
    }
    validate_instance(&inst, dom)?;
    Ok(inst)
}

fn validate_instance(inst: &InstanceModel, dom: &DomainModel) -> Result<(), PddlError> {
    let mut types: HashMap<&str, &str> = HashMap::new();
    for o in dom.constants.iter().chain(&inst.objects) {
        if !dom.types.contains(&o.ty) {
            return Err(PddlError::UnknownObjectType {
                object: o.name.clone(),
                ty: o.ty.clone(),
            });
        }
        types.insert(&o.name, &o.ty);
    }
    for atom in inst.init.iter().chain(&inst.goal) {
        let decl = dom
            .predicate(&atom.predicate)
            .ok_or_else(|| PddlError::UnknownPredicate(atom.predicate.clone()))?;
        if decl.arity() != atom.args.len() {
            return Err(PddlError::ArityMismatch {
                predicate: atom.predicate.clone(),
                expected: decl.arity(),
                found: atom.args.len(),
            });
        }
        for (arg, param) in atom.args.iter().zip(&decl.params) {
            let ty = types
                .get(arg.as_str())
                .ok_or_else(|| PddlError::UnknownObject(arg.clone()))?;
            if !dom.types.is_subtype(ty, &param.ty) {
                return Err(PddlError::TypeMismatch {
                    atom: atom.to_string(),
                    object: arg.clone(),
                    expected: param.ty.clone(),
                });
            }
        }
    }
    Ok(())
}
