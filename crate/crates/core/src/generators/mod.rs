//! Seeded PDDL instance generators for the benchmark domains, plus JSON
//! suite manifests expanding parameter grids into concrete specs.

pub mod domains;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::pddl::{GroundAtom, InstanceModel, TypedName, ROOT_TYPE};

#[derive(Debug, Error)]
pub enum GenError {
    #[error("invalid {domain} spec: {msg}")]
    InvalidSpec { domain: DomainTag, msg: String },
    #[error("unknown domain `{0}`")]
    UnknownDomain(String),
    #[error("cannot read manifest: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed manifest: {0}")]
    Manifest(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainTag {
    Delivery,
    Gripper,
    Spanner,
    Miconic,
    Reward,
    Visitall,
    Blocks,
    Childsnack,
}

impl DomainTag {
    pub const ALL: [DomainTag; 8] = [
        DomainTag::Delivery,
        DomainTag::Gripper,
        DomainTag::Spanner,
        DomainTag::Miconic,
        DomainTag::Reward,
        DomainTag::Visitall,
        DomainTag::Blocks,
        DomainTag::Childsnack,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DomainTag::Delivery => "delivery",
            DomainTag::Gripper => "gripper",
            DomainTag::Spanner => "spanner",
            DomainTag::Miconic => "miconic",
            DomainTag::Reward => "reward",
            DomainTag::Visitall => "visitall",
            DomainTag::Blocks => "blocks",
            DomainTag::Childsnack => "childsnack",
        }
    }

    pub fn domain_pddl(self) -> &'static str {
        match self {
            DomainTag::Delivery => domains::DELIVERY,
            DomainTag::Gripper => domains::GRIPPER,
            DomainTag::Spanner => domains::SPANNER,
            DomainTag::Miconic => domains::MICONIC,
            DomainTag::Reward => domains::REWARD,
            DomainTag::Visitall => domains::VISITALL,
            DomainTag::Blocks => domains::BLOCKS,
            DomainTag::Childsnack => domains::CHILDSNACK,
        }
    }

    /// Recognizes the PDDL domain names used by the shipped domain files
    /// and common IPC spellings.
    pub fn from_domain_name(name: &str) -> Option<DomainTag> {
        name.parse().ok()
    }
}

impl FromStr for DomainTag {
    type Err = GenError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s
            .to_ascii_lowercase()
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect();
        Ok(match norm.as_str() {
            "delivery" => DomainTag::Delivery,
            "gripper" | "gripperstrips" => DomainTag::Gripper,
            "spanner" => DomainTag::Spanner,
            "miconic" => DomainTag::Miconic,
            "reward" => DomainTag::Reward,
            "visitall" | "gridvisitall" => DomainTag::Visitall,
            "blocks" | "blocksworld" => DomainTag::Blocks,
            "childsnack" => DomainTag::Childsnack,
            _ => return Err(GenError::UnknownDomain(s.to_string())),
        })
    }
}

impl fmt::Display for DomainTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Numeric knobs shared by all generators; each domain reads the ones it
/// needs and falls back to a small default for the rest.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub packages: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agents: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unique_targets: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub balls: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spanners: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nuts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub locations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub floors: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub passengers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rewards: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstacles: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub visit_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocks: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub towers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub children: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gluten_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trays: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tables: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub domain: DomainTag,
    #[serde(default)]
    pub seed: u64,
    #[serde(flatten)]
    pub params: GenParams,
}

impl GenSpec {
    pub fn new(domain: DomainTag, seed: u64) -> Self {
        GenSpec {
            domain,
            seed,
            params: GenParams::default(),
        }
    }

    fn grid(&self) -> (usize, usize) {
        let p = &self.params;
        let x = p.x.or(p.size).unwrap_or(3);
        let y = p.y.or(p.size).unwrap_or(x);
        (x, y)
    }

    /// The object count plotted on the x axis of subgoal curves.
    pub fn characteristic_count(&self) -> usize {
        let p = &self.params;
        match self.domain {
            DomainTag::Delivery => p.packages.unwrap_or(1),
            DomainTag::Gripper => p.balls.unwrap_or(1),
            DomainTag::Spanner => p.nuts.unwrap_or(1),
            DomainTag::Miconic => p.passengers.unwrap_or(1),
            DomainTag::Reward => p.rewards.unwrap_or(1),
            DomainTag::Visitall => self.goal_cells(),
            DomainTag::Blocks => p.blocks.unwrap_or(3),
            DomainTag::Childsnack => p.children.unwrap_or(1),
        }
    }

    pub fn agents(&self) -> Option<usize> {
        (self.domain == DomainTag::Delivery).then(|| self.params.agents.unwrap_or(1))
    }

    fn goal_cells(&self) -> usize {
        let (x, y) = self.grid();
        let f = self.params.visit_fraction.unwrap_or(1.0);
        ((f * (x * y) as f64).round() as usize).clamp(1, x * y)
    }

    /// Stable instance identifier built from the domain, parameters and seed.
    pub fn instance_id(&self) -> String {
        let p = &self.params;
        let (x, y) = self.grid();
        let body = match self.domain {
            DomainTag::Delivery => format!(
                "{x}x{y}-p{}-a{}{}",
                p.packages.unwrap_or(1),
                p.agents.unwrap_or(1),
                if p.unique_targets.unwrap_or(false) { "-u" } else { "" }
            ),
            DomainTag::Gripper => format!("b{}", p.balls.unwrap_or(1)),
            DomainTag::Spanner => format!(
                "s{}-n{}-l{}",
                p.spanners.unwrap_or(1),
                p.nuts.unwrap_or(1),
                p.locations.unwrap_or(1)
            ),
            DomainTag::Miconic => format!("f{}-p{}", p.floors.unwrap_or(2), p.passengers.unwrap_or(1)),
            DomainTag::Reward => format!("{x}x{y}-r{}-o{}", p.rewards.unwrap_or(1), p.obstacles.unwrap_or(0)),
            DomainTag::Visitall => format!("{x}x{y}-g{}", self.goal_cells()),
            DomainTag::Blocks => format!("n{}-t{}", p.blocks.unwrap_or(3), p.towers.unwrap_or(1)),
            DomainTag::Childsnack => format!(
                "c{}-g{}-t{}",
                p.children.unwrap_or(1),
                allergic_count(p.children.unwrap_or(1), p.gluten_ratio.unwrap_or(0.0)),
                p.trays.unwrap_or(1)
            ),
        };
        format!("{}-{body}-s{}", self.domain, self.seed)
    }
}

fn allergic_count(children: usize, ratio: f64) -> usize {
    ((ratio * children as f64).round() as usize).min(children)
}

/// Domain and problem PDDL text for `spec`. Output depends only on the spec.
pub fn generate(spec: &GenSpec) -> Result<(String, String), GenError> {
    let inst = generate_instance(spec)?;
    Ok((spec.domain.domain_pddl().to_string(), inst.to_pddl()))
}

pub fn generate_instance(spec: &GenSpec) -> Result<InstanceModel, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let invalid = |msg: String| GenError::InvalidSpec {
        domain: spec.domain,
        msg,
    };
    let p = &spec.params;
    for (name, v) in [("gluten_ratio", p.gluten_ratio), ("visit_fraction", p.visit_fraction)] {
        if let Some(v) = v {
            if !(0.0..=1.0).contains(&v) {
                return Err(invalid(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
    }
    let mut b = Builder::new(spec);
    match spec.domain {
        DomainTag::Delivery => delivery(&mut b, &mut rng).map_err(invalid)?,
        DomainTag::Gripper => gripper(&mut b),
        DomainTag::Spanner => spanner(&mut b, &mut rng).map_err(invalid)?,
        DomainTag::Miconic => miconic(&mut b, &mut rng).map_err(invalid)?,
        DomainTag::Reward => reward(&mut b, &mut rng).map_err(invalid)?,
        DomainTag::Visitall => visitall(&mut b, &mut rng).map_err(invalid)?,
        DomainTag::Blocks => blocks(&mut b, &mut rng).map_err(invalid)?,
        DomainTag::Childsnack => childsnack(&mut b, &mut rng),
    }
    Ok(b.inst)
}

struct Builder<'a> {
    spec: &'a GenSpec,
    inst: InstanceModel,
}

impl<'a> Builder<'a> {
    fn new(spec: &'a GenSpec) -> Self {
        let domain_name = match spec.domain {
            DomainTag::Visitall => "grid-visit-all",
            DomainTag::Childsnack => "child-snack",
            d => d.as_str(),
        };
        Builder {
            spec,
            inst: InstanceModel {
                name: spec.instance_id(),
                domain_name: domain_name.to_string(),
                objects: Vec::new(),
                init: Vec::new(),
                goal: Vec::new(),
            },
        }
    }

    fn object(&mut self, name: &str, ty: &str) {
        self.inst.objects.push(TypedName::new(name, ty));
    }

    fn init<const N: usize>(&mut self, pred: &str, args: [&str; N]) {
        self.inst.init.push(GroundAtom::new(pred, args));
    }

    fn goal<const N: usize>(&mut self, pred: &str, args: [&str; N]) {
        self.inst.goal.push(GroundAtom::new(pred, args));
    }
}

fn cell(i: usize, j: usize) -> String {
    format!("c_{i}_{j}")
}

/// 4-connected grid cells `c_i_j` and both directions of every adjacency.
fn grid_cells(b: &mut Builder<'_>, x: usize, y: usize, ty: &str, pred: &str) -> Vec<String> {
    let mut cells = Vec::with_capacity(x * y);
    for i in 0..x {
        for j in 0..y {
            b.object(&cell(i, j), ty);
            cells.push(cell(i, j));
        }
    }
    for i in 0..x {
        for j in 0..y {
            for (di, dj) in [(0i64, 1i64), (1, 0), (0, -1), (-1, 0)] {
                let (ni, nj) = (i as i64 + di, j as i64 + dj);
                if ni >= 0 && nj >= 0 && (ni as usize) < x && (nj as usize) < y {
                    b.init(pred, [&cell(i, j), &cell(ni as usize, nj as usize)]);
                }
            }
        }
    }
    cells
}

fn delivery(b: &mut Builder<'_>, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (x, y) = b.spec.grid();
    let p = &b.spec.params;
    let (packages, agents) = (p.packages.unwrap_or(1), p.agents.unwrap_or(1));
    let unique = p.unique_targets.unwrap_or(false);
    if x * y < 2 && packages > 0 {
        return Err("packages need a grid with at least two cells".into());
    }
    let cells = grid_cells(b, x, y, "cell", "adjacent");
    if unique && packages > cells.len() {
        return Err(format!("{packages} unique targets exceed {} cells", cells.len()));
    }
    let shared = cells[rng.gen_range(0..cells.len())].clone();
    let distinct: Vec<String> = if unique {
        cells.choose_multiple(rng, packages).cloned().collect()
    } else {
        Vec::new()
    };
    for k in 1..=packages {
        let name = format!("p{k}");
        b.object(&name, "package");
        let target = if unique { distinct[k - 1].clone() } else { shared.clone() };
        let start = loop {
            let c = &cells[rng.gen_range(0..cells.len())];
            if *c != target {
                break c.clone();
            }
        };
        b.init("at", [&name, &start]);
        b.goal("at", [&name, &target]);
    }
    for k in 1..=agents {
        let name = format!("t{k}");
        b.object(&name, "truck");
        let start = cells[rng.gen_range(0..cells.len())].clone();
        b.init("at", [&name, &start]);
        b.init("empty", [&name]);
    }
    Ok(())
}

fn gripper(b: &mut Builder<'_>) {
    let balls = b.spec.params.balls.unwrap_or(1);
    for r in ["rooma", "roomb"] {
        b.object(r, ROOT_TYPE);
        b.init("room", [r]);
    }
    for g in ["left", "right"] {
        b.object(g, ROOT_TYPE);
        b.init("gripper", [g]);
        b.init("free", [g]);
    }
    b.init("at-robby", ["rooma"]);
    for k in 1..=balls {
        let name = format!("ball{k}");
        b.object(&name, ROOT_TYPE);
        b.init("ball", [&name]);
        b.init("at", [&name, "rooma"]);
        b.goal("at", [&name, "roomb"]);
    }
}

fn spanner(b: &mut Builder<'_>, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let p = &b.spec.params;
    let (spanners, nuts, locations) = (p.spanners.unwrap_or(1), p.nuts.unwrap_or(1), p.locations.unwrap_or(1));
    if spanners < nuts {
        return Err(format!("{spanners} spanners cannot tighten {nuts} nuts"));
    }
    if locations == 0 && spanners > 0 {
        return Err("spanners need at least one corridor location".into());
    }
    b.object("bob", "man");
    b.object("shed", "location");
    b.object("gate", "location");
    let corridor: Vec<String> = (1..=locations).map(|k| format!("location{k}")).collect();
    for l in &corridor {
        b.object(l, "location");
    }
    b.init("at", ["bob", "shed"]);
    let mut prev = "shed".to_string();
    for l in corridor.iter().chain(std::iter::once(&"gate".to_string())) {
        b.init("link", [&prev, l]);
        prev = l.clone();
    }
    for k in 1..=spanners {
        let name = format!("spanner{k}");
        b.object(&name, "spanner");
        let at = corridor[rng.gen_range(0..corridor.len())].clone();
        b.init("at", [&name, &at]);
        b.init("useable", [&name]);
    }
    for k in 1..=nuts {
        let name = format!("nut{k}");
        b.object(&name, "nut");
        b.init("at", [&name, "gate"]);
        b.init("loose", [&name]);
        b.goal("tightened", [&name]);
    }
    Ok(())
}

fn miconic(b: &mut Builder<'_>, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let p = &b.spec.params;
    let (floors, passengers) = (p.floors.unwrap_or(2), p.passengers.unwrap_or(1));
    if floors < 2 && passengers > 0 {
        return Err("passengers need at least two floors".into());
    }
    if floors == 0 {
        return Err("the lift needs at least one floor".into());
    }
    let names: Vec<String> = (0..floors).map(|k| format!("f{k}")).collect();
    for f in &names {
        b.object(f, ROOT_TYPE);
        b.init("floor", [f]);
    }
    for i in 0..floors {
        for j in i + 1..floors {
            b.init("above", [&names[i], &names[j]]);
        }
    }
    b.init("lift-at", [&names[0]]);
    for k in 0..passengers {
        let name = format!("p{k}");
        b.object(&name, ROOT_TYPE);
        b.init("passenger", [&name]);
        let origin = rng.gen_range(0..floors);
        let dest = (origin + rng.gen_range(1..floors)) % floors;
        b.init("origin", [&name, &names[origin]]);
        b.init("destin", [&name, &names[dest]]);
        b.goal("served", [&name]);
    }
    Ok(())
}

fn reward(b: &mut Builder<'_>, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (x, y) = b.spec.grid();
    let p = &b.spec.params;
    let (rewards, obstacles) = (p.rewards.unwrap_or(1), p.obstacles.unwrap_or(0));
    if x * y == 0 {
        return Err("grid must have at least one cell".into());
    }
    if rewards + obstacles + 1 > x * y {
        return Err(format!(
            "{rewards} rewards and {obstacles} obstacles do not fit a {x}x{y} grid"
        ));
    }
    let cells = grid_cells(b, x, y, "cell", "adjacent");
    let start = 0usize;
    let mut others: Vec<usize> = (1..cells.len()).collect();
    let mut attempt = 0;
    let (blocked, placed) = loop {
        others.shuffle(rng);
        let blocked: BTreeSet<usize> = others[..obstacles].iter().copied().collect();
        let placed: Vec<usize> = others[obstacles..obstacles + rewards].to_vec();
        if grid_connected(x, y, start, &blocked, &placed) {
            break (blocked, placed);
        }
        attempt += 1;
        if attempt >= 200 {
            return Err("could not place obstacles without disconnecting a reward".into());
        }
    };
    b.init("at", [&cells[start]]);
    for (i, c) in cells.iter().enumerate() {
        if !blocked.contains(&i) {
            b.init("unblocked", [c]);
        }
    }
    let mut placed = placed;
    placed.sort_unstable();
    for &r in &placed {
        b.init("reward", [&cells[r]]);
        b.goal("picked", [&cells[r]]);
    }
    Ok(())
}

fn grid_connected(x: usize, y: usize, start: usize, blocked: &BTreeSet<usize>, targets: &[usize]) -> bool {
    let mut seen = vec![false; x * y];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(c) = queue.pop_front() {
        let (i, j) = (c / y, c % y);
        let mut nbrs = Vec::with_capacity(4);
        if i > 0 {
            nbrs.push(c - y);
        }
        if i + 1 < x {
            nbrs.push(c + y);
        }
        if j > 0 {
            nbrs.push(c - 1);
        }
        if j + 1 < y {
            nbrs.push(c + 1);
        }
        for n in nbrs {
            if !seen[n] && !blocked.contains(&n) {
                seen[n] = true;
                queue.push_back(n);
            }
        }
    }
    targets.iter().all(|&t| seen[t])
}

fn visitall(b: &mut Builder<'_>, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (x, y) = b.spec.grid();
    if x * y == 0 {
        return Err("grid must have at least one cell".into());
    }
    let cells = grid_cells(b, x, y, "place", "connected");
    let start = rng.gen_range(0..cells.len());
    b.init("at-robot", [&cells[start]]);
    b.init("visited", [&cells[start]]);
    let mut order: Vec<usize> = (0..cells.len()).collect();
    order.shuffle(rng);
    let mut goal: Vec<usize> = order[..b.spec.goal_cells()].to_vec();
    goal.sort_unstable();
    for g in goal {
        b.goal("visited", [&cells[g]]);
    }
    Ok(())
}

/// Splits `blocks` into `parts` non-empty consecutive towers (bottom first).
fn split_towers(blocks: &[String], parts: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<String>> {
    let mut cuts: Vec<usize> = (1..blocks.len()).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts[..parts - 1].to_vec();
    cuts.sort_unstable();
    let mut towers = Vec::new();
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(blocks.len())) {
        towers.push(blocks[prev..c].to_vec());
        prev = c;
    }
    towers
}

fn blocks(b: &mut Builder<'_>, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let p = &b.spec.params;
    let (n, towers) = (p.blocks.unwrap_or(3), p.towers.unwrap_or(1));
    if n == 0 {
        return Err("need at least one block".into());
    }
    if towers == 0 || towers > n {
        return Err(format!("cannot build {towers} towers from {n} blocks"));
    }
    let names: Vec<String> = (1..=n).map(|k| format!("b{k}")).collect();
    for nm in &names {
        b.object(nm, ROOT_TYPE);
    }
    let mut order = names.clone();
    order.shuffle(rng);
    let init_count = rng.gen_range(1..=n);
    let start = split_towers(&order, init_count, rng);
    b.init("handempty", []);
    for t in &start {
        b.init("ontable", [&t[0]]);
        for w in t.windows(2) {
            b.init("on", [&w[1], &w[0]]);
        }
        b.init("clear", [t.last().expect("towers are non-empty")]);
    }
    let mut goal_order = names.clone();
    loop {
        goal_order.shuffle(rng);
        if towers > 1 || n < 2 || start.len() != 1 || goal_order != start[0] {
            break;
        }
    }
    for t in split_towers(&goal_order, towers, rng) {
        for w in t.windows(2) {
            b.goal("on", [&w[1], &w[0]]);
        }
    }
    Ok(())
}

fn childsnack(b: &mut Builder<'_>, rng: &mut ChaCha8Rng) {
    let p = &b.spec.params;
    let children = p.children.unwrap_or(1);
    let allergic = allergic_count(children, p.gluten_ratio.unwrap_or(0.0));
    let trays = p.trays.unwrap_or(1).max(1);
    let tables = p.tables.unwrap_or(3).max(1);
    let kids: Vec<String> = (1..=children).map(|k| format!("child{k}")).collect();
    let bread: Vec<String> = (1..=children).map(|k| format!("bread{k}")).collect();
    let content: Vec<String> = (1..=children).map(|k| format!("content{k}")).collect();
    let sandwiches: Vec<String> = (1..=children).map(|k| format!("sandw{k}")).collect();
    let table_names: Vec<String> = (1..=tables).map(|k| format!("table{k}")).collect();
    let tray_names: Vec<String> = (1..=trays).map(|k| format!("tray{k}")).collect();
    for (list, ty) in [
        (&bread, "bread-portion"),
        (&kids, "child"),
        (&content, "content-portion"),
        (&sandwiches, "sandwich"),
        (&table_names, "place"),
        (&tray_names, "tray"),
    ] {
        for o in list {
            b.object(o, ty);
        }
    }
    for x in &bread {
        b.init("at_kitchen_bread", [x]);
    }
    for x in &content {
        b.init("at_kitchen_content", [x]);
    }
    let mut gf_bread: Vec<usize> = (0..children).collect();
    gf_bread.shuffle(rng);
    let mut gf_content: Vec<usize> = (0..children).collect();
    gf_content.shuffle(rng);
    let mut allergic_kids: Vec<usize> = (0..children).collect();
    allergic_kids.shuffle(rng);
    let allergic_kids: BTreeSet<usize> = allergic_kids[..allergic].iter().copied().collect();
    let mut gb: Vec<usize> = gf_bread[..allergic].to_vec();
    gb.sort_unstable();
    for i in gb {
        b.init("no_gluten_bread", [&bread[i]]);
    }
    let mut gc: Vec<usize> = gf_content[..allergic].to_vec();
    gc.sort_unstable();
    for i in gc {
        b.init("no_gluten_content", [&content[i]]);
    }
    for (i, kid) in kids.iter().enumerate() {
        if allergic_kids.contains(&i) {
            b.init("allergic_gluten", [kid]);
        } else {
            b.init("not_allergic_gluten", [kid]);
        }
        let table = table_names[rng.gen_range(0..tables)].clone();
        b.init("waiting", [kid, &table]);
        b.goal("served", [kid]);
    }
    for t in &tray_names {
        b.init("at", [t, "kitchen"]);
    }
    for s in &sandwiches {
        b.init("notexist", [s]);
    }
}

/// A parameter grid: each entry names a domain; other keys hold a scalar or
/// an array of values, and the cartesian product of the arrays is taken.
/// `repeat` sets instances per grid point, each with its own derived seed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteManifest {
    #[serde(default)]
    pub seed: u64,
    pub entries: Vec<Map<String, Value>>,
}

/// Mixes a suite seed and an instance index into an instance seed.
pub fn derive_seed(suite_seed: u64, index: u64) -> u64 {
    let mut z = suite_seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SuiteManifest {
    pub fn from_json(text: &str) -> Result<Self, GenError> {
        serde_json::from_str(text).map_err(|e| GenError::Manifest(e.to_string()))
    }

    pub fn expand(&self) -> Result<Vec<GenSpec>, GenError> {
        let mut specs = Vec::new();
        for entry in &self.entries {
            let repeat = match entry.get("repeat") {
                None => 1,
                Some(v) => v
                    .as_u64()
                    .ok_or_else(|| GenError::Manifest("`repeat` must be a non-negative integer".into()))?,
            };
            let mut points: Vec<Map<String, Value>> = vec![Map::new()];
            for (key, value) in entry {
                if key == "repeat" {
                    continue;
                }
                let options = match value {
                    Value::Array(vs) => vs.clone(),
                    v => vec![v.clone()],
                };
                points = points
                    .into_iter()
                    .flat_map(|pt| {
                        options.iter().map(move |o| {
                            let mut pt = pt.clone();
                            pt.insert(key.clone(), o.clone());
                            pt
                        })
                    })
                    .collect();
            }
            for pt in points {
                for _ in 0..repeat {
                    let mut pt = pt.clone();
                    if !pt.contains_key("seed") {
                        pt.insert("seed".into(), Value::from(derive_seed(self.seed, specs.len() as u64)));
                    }
                    let spec: GenSpec =
                        serde_json::from_value(Value::Object(pt)).map_err(|e| GenError::Manifest(e.to_string()))?;
                    specs.push(spec);
                }
            }
        }
        Ok(specs)
    }
}

/// Reads a suite manifest file and expands it into concrete specs.
pub fn suite(path: &Path) -> Result<Vec<GenSpec>, GenError> {
    SuiteManifest::from_json(&std::fs::read_to_string(path)?)?.expand()
}
