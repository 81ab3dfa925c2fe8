//! Fragmentation runs under the supported time parametrizations.
//!
//! A run is a sequential state machine over the living fragments. Two
//! families of scheduler exist:
//!
//! * keyed schedulers ([`Scheduler::LargestAreaFirst`],
//!   [`Scheduler::LargestWidthFirst`]) always split the fragment with the
//!   largest key. Time is `-ln(key)`, so a fragment's birth time is
//!   `-ln` of its own key and the run clock is `-ln` of the largest key
//!   still alive;
//! * clocked schedulers ([`Scheduler::ConstantRate`],
//!   [`Scheduler::DiscreteGenerations`], [`Scheduler::GeometricStep`])
//!   give every fragment its own lifetime and use absolute time.
//!
//! Per split the direction is drawn first, then the split fraction.
//! Ties between equal keys (or equal death times) go to the fragment
//! created first.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use arrayvec::ArrayVec;

use crate::error::{config, domain, Error, Result};
use crate::geometry::{
    split_cuboid, split_rectangle, split_triangle, Fragment2D, Fragment3D, InterfaceRecord,
    Orientation, TriangleCut, TriangleFragment,
};
use crate::math::{floor, ln};
use crate::random::{sample_direction, DirectionLaw, NucleationLaw, RandomSource, SplitSampler};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    Rect2D,
    Cuboid3D,
    Triangle2D,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Scheduler {
    /// Split the fragment of largest area (volume) first.
    LargestAreaFirst,
    /// Split the fragment of largest horizontal extent first: side `a` for
    /// rectangles and triangles, face area `a * b` for cuboids.
    LargestWidthFirst,
    /// Independent exponential lifetimes with the given rate.
    ConstantRate { rate: f64 },
    /// Every fragment splits exactly one time unit after its birth.
    DiscreteGenerations,
    /// At every step `k * dt` each fragment splits with probability `dt`.
    GeometricStep { dt: f64 },
}

impl Scheduler {
    fn is_keyed(&self) -> bool {
        matches!(self, Scheduler::LargestAreaFirst | Scheduler::LargestWidthFirst)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StopRule {
    /// Stop once the population holds at least this many fragments.
    FragmentCount(usize),
    /// Stop once the clock reaches this time.
    TimeThreshold(f64),
    /// Never split a fragment of this generation or later.
    GenerationCount(u32),
}

/// Declarative description of one ensemble member.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub model: Model,
    pub direction: DirectionLaw,
    pub nucleation: NucleationLaw,
    pub scheduler: Scheduler,
    pub stop: StopRule,
    pub realization_index: u64,
    pub master_seed: u64,
    /// Keep every fragment ever created so that [`FragmentationRun::population_at`]
    /// can answer for times before the end of the run.
    pub record_lineage: bool,
}

impl RunConfig {
    /// Uniform nucleation, realization 0, seed 0, no lineage.
    pub fn new(model: Model, direction: DirectionLaw, scheduler: Scheduler, stop: StopRule) -> Self {
        Self {
            model,
            direction,
            nucleation: NucleationLaw::Uniform,
            scheduler,
            stop,
            realization_index: 0,
            master_seed: 0,
            record_lineage: false,
        }
    }

    pub fn with_nucleation(mut self, nucleation: NucleationLaw) -> Self {
        self.nucleation = nucleation;
        self
    }

    pub fn with_seed(mut self, master_seed: u64, realization_index: u64) -> Self {
        self.master_seed = master_seed;
        self.realization_index = realization_index;
        self
    }

    pub fn with_lineage(mut self, record: bool) -> Self {
        self.record_lineage = record;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.direction.validate()?;
        self.nucleation.validate()?;
        match (self.model, self.direction) {
            (Model::Rect2D | Model::Triangle2D, DirectionLaw::Planar { .. })
            | (Model::Cuboid3D, DirectionLaw::Spatial { .. }) => {}
            (model, _) => {
                return Err(config!("direction law does not match the dimension of {model:?}"))
            }
        }
        match self.scheduler {
            Scheduler::ConstantRate { rate } if !(rate > 0.0 && rate.is_finite()) => {
                return Err(config!("rate must be positive, got {rate}"))
            }
            Scheduler::GeometricStep { dt } if !(dt > 0.0 && dt <= 1.0) => {
                return Err(config!("dt must lie in (0, 1], got {dt}"))
            }
            _ => {}
        }
        if let StopRule::TimeThreshold(t) = self.stop {
            if !(t > 0.0 && t.is_finite()) {
                return Err(config!("time threshold must be positive, got {t}"));
            }
        }
        Ok(())
    }

    /// Whether the horizontal-interface count of the complete fragmentation
    /// is infinite (or of infinite mean): horizontal probability at least 1/2.
    pub fn divergent_tail(&self) -> bool {
        match (self.model, self.direction) {
            (Model::Rect2D, DirectionLaw::Planar { p }) => p >= 0.5,
            (Model::Cuboid3D, DirectionLaw::Spatial { weights }) => weights[2] >= 0.5,
            _ => false,
        }
    }
}

/// Living fragments of one model.
#[derive(Clone, Debug, PartialEq)]
pub enum Fragments {
    Rect(Vec<Fragment2D>),
    Cuboid(Vec<Fragment3D>),
    Triangle(Vec<TriangleFragment>),
}

impl Fragments {
    pub fn len(&self) -> usize {
        match self {
            Fragments::Rect(v) => v.len(),
            Fragments::Cuboid(v) => v.len(),
            Fragments::Triangle(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sum of areas (volumes for cuboids).
    pub fn total_measure(&self) -> f64 {
        match self {
            Fragments::Rect(v) => v.iter().map(Fragment2D::area).sum(),
            Fragments::Cuboid(v) => v.iter().map(Fragment3D::volume).sum(),
            Fragments::Triangle(v) => v.iter().map(TriangleFragment::area).sum(),
        }
    }

    pub fn as_rectangles(&self) -> Option<&[Fragment2D]> {
        match self {
            Fragments::Rect(v) => Some(v),
            _ => None,
        }
    }
}

/// A fragment together with the times bounding its life.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ancestor<P> {
    pub fragment: P,
    /// Birth time of the parent; `-inf` for the initial fragment.
    pub parent_birth: f64,
    /// Time of the split that ended this fragment; `+inf` if still alive.
    pub death_time: f64,
}

/// Every fragment ever created during a run.
#[derive(Clone, Debug, PartialEq)]
pub enum Lineage {
    Rect(Vec<Ancestor<Fragment2D>>),
    Cuboid(Vec<Ancestor<Fragment3D>>),
    Triangle(Vec<Ancestor<TriangleFragment>>),
}

impl Lineage {
    pub fn len(&self) -> usize {
        match self {
            Lineage::Rect(v) => v.len(),
            Lineage::Cuboid(v) => v.len(),
            Lineage::Triangle(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Complete output of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct FragmentationRun {
    pub model: Model,
    pub scheduler: Scheduler,
    pub population: Fragments,
    pub interfaces: Vec<InterfaceRecord>,
    pub events: u64,
    pub clock: f64,
    pub lineage: Option<Lineage>,
}

impl FragmentationRun {
    /// Fragments alive at time `t`.
    ///
    /// Largest-area-first: fragments of area at most `e^-t` whose parent was
    /// larger than `e^-t`. Clocked schedulers: fragments born at or before
    /// `t` that had not split by `t`.
    pub fn population_at(&self, t: f64) -> Result<Fragments> {
        if !(t >= 0.0) {
            return Err(domain!("snapshot time must be nonnegative, got {t}"));
        }
        if t > self.clock {
            return Err(Error::BeyondHorizon {
                requested: t,
                horizon: self.clock,
            });
        }
        if self.scheduler == Scheduler::LargestWidthFirst {
            return Err(domain!(
                "largest-width-first runs have no time-indexed population snapshot"
            ));
        }
        let Some(lineage) = &self.lineage else {
            if t == self.clock {
                return Ok(self.population.clone());
            }
            return Err(Error::LineageMissing);
        };
        let keyed = self.scheduler.is_keyed();
        Ok(match lineage {
            Lineage::Rect(v) => Fragments::Rect(snapshot(v, t, keyed)),
            Lineage::Cuboid(v) => Fragments::Cuboid(snapshot(v, t, keyed)),
            Lineage::Triangle(v) => Fragments::Triangle(snapshot(v, t, keyed)),
        })
    }

    /// Number of logged interfaces with this orientation and size at least `x`.
    pub fn interface_tail_count(&self, orientation: Orientation, x: f64) -> Result<usize> {
        if !(x > 0.0) {
            return Err(domain!("size threshold must be positive, got {x}"));
        }
        Ok(self
            .interfaces
            .iter()
            .filter(|i| i.orientation == orientation && i.size >= x)
            .count())
    }

    /// Sizes of the logged interfaces with the given orientation, in log order.
    pub fn interface_sizes(&self, orientation: Orientation) -> Vec<f64> {
        self.interfaces
            .iter()
            .filter(|i| i.orientation == orientation)
            .map(|i| i.size)
            .collect()
    }
}

fn snapshot<P: Piece>(ancestors: &[Ancestor<P>], t: f64, keyed: bool) -> Vec<P> {
    ancestors
        .iter()
        .filter(|anc| {
            let birth = anc.fragment.birth_time();
            if keyed {
                anc.parent_birth < t && t <= birth
            } else {
                birth <= t && t < anc.death_time
            }
        })
        .map(|anc| anc.fragment)
        .collect()
}

/// Number of logged interfaces of `orientation` with size at least `x`.
pub fn interface_tail_count(run: &FragmentationRun, orientation: Orientation, x: f64) -> Result<usize> {
    run.interface_tail_count(orientation, x)
}

/// Execute one run.
pub fn run_fragmentation(config: &RunConfig) -> Result<FragmentationRun> {
    config.validate()?;
    if config.scheduler == Scheduler::LargestWidthFirst && config.divergent_tail() {
        log::warn!(
            "horizontal probability >= 1/2: the limiting horizontal interface count is infinite \
             or of infinite mean; the run still stops at {:?}",
            config.stop
        );
    }
    let laws = Laws {
        direction: config.direction,
        sampler: config.nucleation.sampler()?,
    };
    let run = match config.model {
        Model::Rect2D => simulate::<Fragment2D>(config, &laws),
        Model::Cuboid3D => simulate::<Fragment3D>(config, &laws),
        Model::Triangle2D => simulate::<TriangleFragment>(config, &laws),
    };
    Ok(run)
}

struct Laws {
    direction: DirectionLaw,
    sampler: SplitSampler,
}

type Children<P> = ArrayVec<P, 4>;
type Interfaces = ArrayVec<InterfaceRecord, 3>;

trait Piece: Copy {
    fn unit() -> Self;
    /// Measure relative to the initial domain (area, volume, or twice the
    /// triangle area).
    fn measure(&self) -> f64;
    fn width(&self) -> f64;
    fn birth_time(&self) -> f64;
    fn set_birth_time(&mut self, t: f64);
    fn generation(&self) -> u32;
    fn split(&self, laws: &Laws, src: &mut RandomSource, kids: &mut Children<Self>, ifaces: &mut Interfaces);
    fn wrap(v: Vec<Self>) -> Fragments;
    fn wrap_lineage(v: Vec<Ancestor<Self>>) -> Lineage;
}

impl Piece for Fragment2D {
    fn unit() -> Self {
        Fragment2D::unit()
    }
    fn measure(&self) -> f64 {
        self.area()
    }
    fn width(&self) -> f64 {
        self.a
    }
    fn birth_time(&self) -> f64 {
        self.birth_time
    }
    fn set_birth_time(&mut self, t: f64) {
        self.birth_time = t;
    }
    fn generation(&self) -> u32 {
        self.generation
    }
    fn split(&self, laws: &Laws, src: &mut RandomSource, kids: &mut Children<Self>, ifaces: &mut Interfaces) {
        let orientation = sample_direction(&laws.direction, src);
        let u = laws.sampler.sample(src);
        let (c1, c2, i) = split_rectangle(self, u, orientation).expect("fraction in (0, 1)");
        kids.push(c1);
        kids.push(c2);
        ifaces.push(i);
    }
    fn wrap(v: Vec<Self>) -> Fragments {
        Fragments::Rect(v)
    }
    fn wrap_lineage(v: Vec<Ancestor<Self>>) -> Lineage {
        Lineage::Rect(v)
    }
}

impl Piece for Fragment3D {
    fn unit() -> Self {
        Fragment3D::unit()
    }
    fn measure(&self) -> f64 {
        self.volume()
    }
    fn width(&self) -> f64 {
        self.horizontal_area()
    }
    fn birth_time(&self) -> f64 {
        self.birth_time
    }
    fn set_birth_time(&mut self, t: f64) {
        self.birth_time = t;
    }
    fn generation(&self) -> u32 {
        self.generation
    }
    fn split(&self, laws: &Laws, src: &mut RandomSource, kids: &mut Children<Self>, ifaces: &mut Interfaces) {
        let axis = sample_direction(&laws.direction, src);
        let u = laws.sampler.sample(src);
        let (c1, c2, i) = split_cuboid(self, u, axis).expect("fraction in (0, 1)");
        kids.push(c1);
        kids.push(c2);
        ifaces.push(i);
    }
    fn wrap(v: Vec<Self>) -> Fragments {
        Fragments::Cuboid(v)
    }
    fn wrap_lineage(v: Vec<Ancestor<Self>>) -> Lineage {
        Lineage::Cuboid(v)
    }
}

impl Piece for TriangleFragment {
    fn unit() -> Self {
        TriangleFragment::unit()
    }
    fn measure(&self) -> f64 {
        self.a * self.b
    }
    fn width(&self) -> f64 {
        self.a
    }
    fn birth_time(&self) -> f64 {
        self.birth_time
    }
    fn set_birth_time(&mut self, t: f64) {
        self.birth_time = t;
    }
    fn generation(&self) -> u32 {
        self.generation
    }
    fn split(&self, laws: &Laws, src: &mut RandomSource, kids: &mut Children<Self>, ifaces: &mut Interfaces) {
        let cut = match sample_direction(&laws.direction, src) {
            Orientation::Horizontal => TriangleCut::A,
            _ => TriangleCut::B,
        };
        let u = laws.sampler.sample(src);
        let (children, new_ifaces) = split_triangle(self, u, cut).expect("fraction in (0, 1)");
        kids.extend(children);
        ifaces.extend(new_ifaces);
    }
    fn wrap(v: Vec<Self>) -> Fragments {
        Fragments::Triangle(v)
    }
    fn wrap_lineage(v: Vec<Ancestor<Self>>) -> Lineage {
        Lineage::Triangle(v)
    }
}

/// A living fragment with its creation index and its parent's birth time.
#[derive(Clone, Copy)]
struct Entry<P> {
    piece: P,
    seq: u64,
    parent_birth: f64,
}

/// Heap element ordered by `rank` (max first), ties to the lower `seq`.
struct Ranked<P> {
    rank: f64,
    entry: Entry<P>,
}

impl<P> PartialEq for Ranked<P> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<P> Eq for Ranked<P> {}
impl<P> PartialOrd for Ranked<P> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<P> Ord for Ranked<P> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank
            .total_cmp(&other.rank)
            .then_with(|| other.entry.seq.cmp(&self.entry.seq))
    }
}

struct Sim<'a, P> {
    laws: &'a Laws,
    src: RandomSource,
    realization: u64,
    interfaces: Vec<InterfaceRecord>,
    events: u64,
    next_seq: u64,
    lineage: Option<Vec<Ancestor<P>>>,
    generation_cap: Option<u32>,
}

impl<P: Piece> Sim<'_, P> {
    fn root(&mut self) -> Entry<P> {
        self.entry(P::unit(), f64::NEG_INFINITY)
    }

    fn entry(&mut self, piece: P, parent_birth: f64) -> Entry<P> {
        let seq = self.next_seq;
        self.next_seq += 1;
        Entry {
            piece,
            seq,
            parent_birth,
        }
    }

    fn splittable(&self, e: &Entry<P>) -> bool {
        self.generation_cap.is_none_or(|g| e.piece.generation() < g)
    }

    /// Split `parent` at `event_time`; children are stamped by `birth_of`.
    fn split(
        &mut self,
        parent: &Entry<P>,
        event_time: f64,
        birth_of: impl Fn(&P) -> f64,
    ) -> ArrayVec<Entry<P>, 4> {
        let mut kids = Children::new();
        let mut ifaces = Interfaces::new();
        parent.piece.split(self.laws, &mut self.src, &mut kids, &mut ifaces);
        for mut i in ifaces {
            i.birth_time = event_time;
            i.realization = self.realization;
            self.interfaces.push(i);
        }
        self.events += 1;
        if let Some(lineage) = &mut self.lineage {
            lineage.push(Ancestor {
                fragment: parent.piece,
                parent_birth: parent.parent_birth,
                death_time: event_time,
            });
        }
        let parent_birth = parent.piece.birth_time();
        kids.into_iter()
            .map(|mut k| {
                k.set_birth_time(birth_of(&k));
                self.entry(k, parent_birth)
            })
            .collect()
    }

    fn finish(mut self, mut alive: Vec<Entry<P>>, clock: f64, config: &RunConfig) -> FragmentationRun {
        alive.sort_by_key(|e| e.seq);
        let lineage = self.lineage.take().map(|mut v| {
            v.extend(alive.iter().map(|e| Ancestor {
                fragment: e.piece,
                parent_birth: e.parent_birth,
                death_time: f64::INFINITY,
            }));
            P::wrap_lineage(v)
        });
        FragmentationRun {
            model: config.model,
            scheduler: config.scheduler,
            population: P::wrap(alive.into_iter().map(|e| e.piece).collect()),
            interfaces: self.interfaces,
            events: self.events,
            clock,
            lineage,
        }
    }
}

fn simulate<P: Piece>(config: &RunConfig, laws: &Laws) -> FragmentationRun {
    let sim = Sim::<P> {
        laws,
        src: RandomSource::for_realization(config.master_seed, config.realization_index),
        realization: config.realization_index,
        interfaces: Vec::new(),
        events: 0,
        next_seq: 0,
        lineage: config.record_lineage.then(Vec::new),
        generation_cap: match config.stop {
            StopRule::GenerationCount(g) => Some(g),
            _ => None,
        },
    };
    match config.scheduler {
        Scheduler::LargestAreaFirst => run_keyed(sim, config, P::measure),
        Scheduler::LargestWidthFirst => run_keyed(sim, config, P::width),
        Scheduler::ConstantRate { rate } => run_constant_rate(sim, config, rate),
        Scheduler::DiscreteGenerations => run_stepped(sim, config, 1.0),
        Scheduler::GeometricStep { dt } => run_stepped(sim, config, dt),
    }
}

fn run_keyed<P: Piece>(mut sim: Sim<'_, P>, config: &RunConfig, key: fn(&P) -> f64) -> FragmentationRun {
    let mut heap = BinaryHeap::new();
    let mut retired = Vec::new();
    let root = sim.root();
    heap.push(Ranked {
        rank: key(&root.piece),
        entry: root,
    });
    let mut alive = 1usize;
    loop {
        if let StopRule::FragmentCount(n) = config.stop {
            if alive >= n {
                break;
            }
        }
        let Some(top) = heap.peek() else { break };
        if let StopRule::TimeThreshold(t) = config.stop {
            if -ln(top.rank) >= t {
                break;
            }
        }
        let top = heap.pop().expect("peeked");
        if !sim.splittable(&top.entry) {
            retired.push(top.entry);
            continue;
        }
        let event_time = -ln(top.rank);
        let kids = sim.split(&top.entry, event_time, |k| -ln(key(k)));
        alive += kids.len() - 1;
        for k in kids {
            heap.push(Ranked {
                rank: key(&k.piece),
                entry: k,
            });
        }
    }
    let mut remaining: Vec<Entry<P>> = heap.into_iter().map(|r| r.entry).collect();
    remaining.extend(retired);
    let largest = remaining
        .iter()
        .map(|e| key(&e.piece))
        .fold(f64::NEG_INFINITY, f64::max);
    sim.finish(remaining, -ln(largest), config)
}

fn run_constant_rate<P: Piece>(mut sim: Sim<'_, P>, config: &RunConfig, rate: f64) -> FragmentationRun {
    // min-heap on death time through a negated rank
    let mut heap = BinaryHeap::new();
    let mut retired = Vec::new();
    let root = sim.root();
    let death = sim.src.exponential(rate);
    heap.push(Ranked {
        rank: -death,
        entry: root,
    });
    if !sim.splittable(&root) {
        retired.extend(heap.pop().map(|r| r.entry));
    }
    let mut alive = 1usize;
    let mut clock = 0.0;
    loop {
        if let StopRule::FragmentCount(n) = config.stop {
            if alive >= n {
                break;
            }
        }
        let Some(top) = heap.peek() else { break };
        let event_time = -top.rank;
        if let StopRule::TimeThreshold(t) = config.stop {
            if event_time > t {
                clock = t;
                break;
            }
        }
        let top = heap.pop().expect("peeked");
        clock = event_time;
        let kids = sim.split(&top.entry, event_time, |_| event_time);
        alive += kids.len() - 1;
        for k in kids {
            if sim.splittable(&k) {
                let death = event_time + sim.src.exponential(rate);
                heap.push(Ranked { rank: -death, entry: k });
            } else {
                retired.push(k);
            }
        }
    }
    if let (StopRule::TimeThreshold(t), true) = (config.stop, heap.is_empty()) {
        clock = t;
    }
    let mut remaining: Vec<Entry<P>> = heap.into_iter().map(|r| r.entry).collect();
    remaining.extend(retired);
    sim.finish(remaining, clock, config)
}

/// Discrete generations (`dt = 1`) and geometric lifetimes (`dt < 1`).
fn run_stepped<P: Piece>(mut sim: Sim<'_, P>, config: &RunConfig, dt: f64) -> FragmentationRun {
    let always = dt >= 1.0;
    let max_steps = match config.stop {
        StopRule::TimeThreshold(t) => Some(floor(t / dt + 1e-9) as u64),
        _ => None,
    };
    let target = match config.stop {
        StopRule::FragmentCount(n) => Some(n),
        _ => None,
    };
    let root = sim.root();
    let mut current = alloc::vec![root];
    let mut eligible = usize::from(sim.splittable(&root));
    let mut clock = 0.0;
    let mut step = 0u64;
    loop {
        if target.is_some_and(|n| current.len() >= n)
            || max_steps.is_some_and(|m| step >= m)
            || eligible == 0
        {
            break;
        }
        step += 1;
        let now = step as f64 * dt;
        clock = now;
        let mut alive = current.len();
        let mut next = Vec::with_capacity(if always { 2 * alive } else { alive + alive / 4 + 4 });
        for e in current {
            let reached = target.is_some_and(|n| alive >= n);
            if reached || !sim.splittable(&e) || !(always || sim.src.bernoulli(dt)) {
                next.push(e);
                continue;
            }
            let kids = sim.split(&e, now, |_| now);
            alive += kids.len() - 1;
            eligible -= 1;
            for k in kids {
                eligible += usize::from(sim.splittable(&k));
                next.push(k);
            }
        }
        current = next;
    }
    sim.finish(current, clock, config)
}
