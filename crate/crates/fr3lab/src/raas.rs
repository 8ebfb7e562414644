//! Slot-based scheduling of radar sensing windows under a cellular frame
//! grid: mission admission, conflict-free placement with pairwise
//! interference control, an independent schedule verifier, and the
//! bandwidth-to-range-resolution arithmetic.
//!
//! Time is a grid of `horizon_frames × n_slots_per_frame` slots over one or
//! more non-overlapping bands. Communication demands are modeled as
//! pre-blocked `(frame, slot, band)` cells. Two missions may share a
//! `(frame, slot, band)` cell only if the link budget says they do not
//! interfere, so sparse deployments get spatial reuse for free.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::SPEED_OF_LIGHT;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RaasError {
    #[error("grid invalid: {0}")]
    InvalidGrid(String),
    #[error("mission {node_id} invalid: {reason}")]
    InvalidMission { node_id: String, reason: String },
    #[error("duplicate node id {0}")]
    DuplicateNode(String),
    #[error("bandwidth must be positive, got {0} Hz")]
    NonPositiveBandwidth(f64),
}

/// One frequency band of the resource grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Band {
    pub center_hz: f64,
    pub width_hz: f64,
}

/// A `(frame, slot, band)` cell reserved for communications.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockedSlot {
    pub frame: usize,
    pub slot: usize,
    pub band: usize,
}

/// The TDD resource plane sensing windows are scheduled on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlotGrid {
    pub n_slots_per_frame: usize,
    pub slot_duration_s: f64,
    pub bands: Vec<Band>,
    pub horizon_frames: usize,
    #[serde(default)]
    pub blocked: Vec<BlockedSlot>,
}

impl SlotGrid {
    pub fn total_slots(&self) -> usize {
        self.n_slots_per_frame * self.horizon_frames
    }

    pub fn validate(&self) -> Result<(), RaasError> {
        if self.n_slots_per_frame == 0 || self.horizon_frames == 0 {
            return Err(RaasError::InvalidGrid(
                "slot and frame counts must be positive".into(),
            ));
        }
        if !(self.slot_duration_s > 0.0) {
            return Err(RaasError::InvalidGrid(
                "slot duration must be positive".into(),
            ));
        }
        if self.bands.is_empty() {
            return Err(RaasError::InvalidGrid("need at least one band".into()));
        }
        for b in &self.bands {
            if !(b.width_hz > 0.0) {
                return Err(RaasError::InvalidGrid(format!(
                    "band at {} Hz has non-positive width",
                    b.center_hz
                )));
            }
        }
        let mut edges: Vec<(f64, f64)> = self
            .bands
            .iter()
            .map(|b| {
                (
                    b.center_hz - b.width_hz / 2.0,
                    b.center_hz + b.width_hz / 2.0,
                )
            })
            .collect();
        edges.sort_by(|a, b| a.0.total_cmp(&b.0));
        for pair in edges.windows(2) {
            if pair[1].0 < pair[0].1 {
                return Err(RaasError::InvalidGrid("bands overlap".into()));
            }
        }
        for blocked in &self.blocked {
            if blocked.frame >= self.horizon_frames
                || blocked.slot >= self.n_slots_per_frame
                || blocked.band >= self.bands.len()
            {
                return Err(RaasError::InvalidGrid(format!(
                    "blocked cell ({}, {}, {}) outside the grid",
                    blocked.frame, blocked.slot, blocked.band
                )));
            }
        }
        Ok(())
    }
}

/// A sensing mission requested by one radar node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MissionProfile {
    pub node_id: String,
    pub required_bandwidth_hz: f64,
    pub window_length_slots: usize,
    /// Period in slots; 0 means a one-shot mission.
    pub period_slots: usize,
    pub required_sinr_db: f64,
    pub position_m: (f64, f64),
    /// Ordinal priority: lower value = more important.
    pub priority: u32,
}

impl MissionProfile {
    fn validate(&self) -> Result<(), RaasError> {
        let fail = |reason: &str| {
            Err(RaasError::InvalidMission {
                node_id: self.node_id.clone(),
                reason: reason.into(),
            })
        };
        if !(self.required_bandwidth_hz > 0.0) {
            return fail("bandwidth must be positive");
        }
        if self.window_length_slots == 0 {
            return fail("window length must be at least one slot");
        }
        if self.period_slots != 0 && self.period_slots < self.window_length_slots {
            return fail("period must be 0 or at least the window length");
        }
        if !self.position_m.0.is_finite() || !self.position_m.1.is_finite() {
            return fail("position must be finite");
        }
        if !self.required_sinr_db.is_finite() {
            return fail("required SINR must be finite");
        }
        Ok(())
    }
}

/// Link-budget constants for the pairwise interference predicate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterferenceModel {
    /// Path-loss exponent of the free-space-like model `d^(-γ)`.
    pub propagation_exponent: f64,
    /// Thermal noise floor, linear power.
    pub thermal_noise: f64,
    /// Received power of the victim's own echo/signal, linear.
    pub victim_signal_power: f64,
    /// Distances clamp here to keep co-located nodes finite.
    pub min_distance_m: f64,
}

impl Default for InterferenceModel {
    fn default() -> Self {
        Self {
            propagation_exponent: 2.0,
            thermal_noise: 1e-9,
            victim_signal_power: 1.0,
            min_distance_m: 1.0,
        }
    }
}

/// Would two co-channel missions break each other's SINR guarantee?
///
/// With unit transmit power the interferer lands `d^(-γ)` at the victim; the
/// victim's SINR is `S / (d^(-γ) + N)`. The check is symmetric and uses the
/// stricter of the two SINR requirements, so "mutually interfere" is a
/// single boolean.
pub fn interferes(a: &MissionProfile, b: &MissionProfile, model: &InterferenceModel) -> bool {
    let dx = a.position_m.0 - b.position_m.0;
    let dy = a.position_m.1 - b.position_m.1;
    let d = f64::hypot(dx, dy).max(model.min_distance_m);
    let interference = d.powf(-model.propagation_exponent);
    let sinr = model.victim_signal_power / (interference + model.thermal_noise);
    let required = 10f64.powf(a.required_sinr_db.max(b.required_sinr_db) / 10.0);
    sinr < required
}

/// Placement policies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    /// Missions by (priority, node id); each occurrence takes the earliest
    /// feasible (slot, band).
    GreedyPriority,
    /// Obligations by (window deadline, priority, node id); same placement
    /// rule.
    EarliestDeadline,
}

/// One granted sensing window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub node_id: String,
    pub frame: usize,
    /// Slot range within the frame, end exclusive.
    pub slot_start: usize,
    pub slot_end: usize,
    pub band: usize,
    /// Index of the periodic obligation this window serves (0 for one-shot).
    pub occurrence: usize,
}

impl Assignment {
    fn global_range(&self, grid: &SlotGrid) -> (usize, usize) {
        let base = self.frame * grid.n_slots_per_frame;
        (base + self.slot_start, base + self.slot_end)
    }
}

/// Why a mission was not granted.
///
/// `Bandwidth`: no grid band is wide enough. `Capacity`: some obligation ran
/// out of feasible cells (the window cannot fit, or every candidate is
/// blocked, or occupied by conflicting grants). `Interference`: reserved for
/// the cumulative-SINR extension, where a placement is free capacity-wise
/// but the aggregate co-channel power would break the SINR guarantee.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RejectReason {
    Bandwidth,
    Capacity,
    Interference,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rejection {
    pub node_id: String,
    pub reason: RejectReason,
    pub detail: String,
}

/// Output of the scheduler.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensingSchedule {
    pub assignments: Vec<Assignment>,
    pub rejections: Vec<Rejection>,
    /// Per band: fraction of (frame, slot) cells carrying at least one
    /// assignment.
    pub utilization: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BuildOptions {
    pub policy: Policy,
    /// When set, a candidate cell also fails if the summed interference
    /// from all co-channel overlapping grants would break the SINR
    /// guarantee, even though every pair individually passes.
    pub cumulative_interference: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            policy: Policy::GreedyPriority,
            cumulative_interference: false,
        }
    }
}

/// Periodic obligations of a mission over the horizon: one full window per
/// complete period, `[k·P, (k+1)·P)` in global slots. One-shot missions get
/// the whole horizon.
fn obligation_windows(mission: &MissionProfile, grid: &SlotGrid) -> Vec<(usize, usize)> {
    let total = grid.total_slots();
    if mission.period_slots == 0 {
        return vec![(0, total)];
    }
    let count = total / mission.period_slots;
    (0..count)
        .map(|k| (k * mission.period_slots, (k + 1) * mission.period_slots))
        .collect()
}

fn candidate_starts(window: (usize, usize), length: usize, grid: &SlotGrid) -> Vec<usize> {
    let (lo, hi) = window;
    let mut starts = Vec::new();
    for t in lo..hi.saturating_sub(length - 1) {
        let slot = t % grid.n_slots_per_frame;
        if slot + length <= grid.n_slots_per_frame && t + length <= hi {
            starts.push(t);
        }
    }
    starts
}

struct Placer<'a> {
    grid: &'a SlotGrid,
    model: &'a InterferenceModel,
    missions: &'a [MissionProfile],
    options: BuildOptions,
    assignments: Vec<Assignment>,
    mission_index: std::collections::HashMap<String, usize>,
}

enum PlaceFailure {
    NoCandidates,
    Occupied,
    CumulativeSinr,
}

impl<'a> Placer<'a> {
    fn mission(&self, node_id: &str) -> &MissionProfile {
        &self.missions[self.mission_index[node_id]]
    }

    fn cell_feasible(
        &self,
        mission: &MissionProfile,
        start: usize,
        band: usize,
    ) -> Result<(), PlaceFailure> {
        let length = mission.window_length_slots;
        let frame = start / self.grid.n_slots_per_frame;
        let slot = start % self.grid.n_slots_per_frame;
        for b in &self.grid.blocked {
            if b.band == band && b.frame == frame && b.slot >= slot && b.slot < slot + length {
                return Err(PlaceFailure::Occupied);
            }
        }
        let mut aggregate = 0.0;
        for existing in &self.assignments {
            let (es, ee) = existing.global_range(self.grid);
            let overlap = es < start + length && start < ee;
            if !overlap {
                continue;
            }
            if existing.node_id == mission.node_id {
                return Err(PlaceFailure::Occupied);
            }
            if existing.band != band {
                continue;
            }
            let other = self.mission(&existing.node_id);
            if interferes(mission, other, self.model) {
                return Err(PlaceFailure::Occupied);
            }
            if self.options.cumulative_interference {
                let dx = mission.position_m.0 - other.position_m.0;
                let dy = mission.position_m.1 - other.position_m.1;
                let d = f64::hypot(dx, dy).max(self.model.min_distance_m);
                aggregate += d.powf(-self.model.propagation_exponent);
            }
        }
        if self.options.cumulative_interference && aggregate > 0.0 {
            let sinr = self.model.victim_signal_power / (aggregate + self.model.thermal_noise);
            if sinr < 10f64.powf(mission.required_sinr_db / 10.0) {
                return Err(PlaceFailure::CumulativeSinr);
            }
        }
        Ok(())
    }

    fn place_occurrence(
        &mut self,
        mission: &MissionProfile,
        occurrence: usize,
        window: (usize, usize),
        bands: &[usize],
    ) -> Result<(), PlaceFailure> {
        let starts = candidate_starts(window, mission.window_length_slots, self.grid);
        if starts.is_empty() {
            return Err(PlaceFailure::NoCandidates);
        }
        let mut saw_cumulative = false;
        for &start in &starts {
            for &band in bands {
                match self.cell_feasible(mission, start, band) {
                    Ok(()) => {
                        let frame = start / self.grid.n_slots_per_frame;
                        let slot = start % self.grid.n_slots_per_frame;
                        self.assignments.push(Assignment {
                            node_id: mission.node_id.clone(),
                            frame,
                            slot_start: slot,
                            slot_end: slot + mission.window_length_slots,
                            band,
                            occurrence,
                        });
                        return Ok(());
                    }
                    Err(PlaceFailure::CumulativeSinr) => saw_cumulative = true,
                    Err(_) => {}
                }
            }
        }
        if saw_cumulative {
            Err(PlaceFailure::CumulativeSinr)
        } else {
            Err(PlaceFailure::Occupied)
        }
    }

    fn drop_node(&mut self, node_id: &str) {
        self.assignments.retain(|a| a.node_id != node_id);
    }
}

/// Deterministic admission and placement of all missions.
///
/// Rejections are results, not errors; the `Err` branch only covers
/// malformed inputs.
pub fn build_schedule(
    grid: &SlotGrid,
    missions: &[MissionProfile],
    model: &InterferenceModel,
    options: BuildOptions,
) -> Result<SensingSchedule, RaasError> {
    grid.validate()?;
    let mut seen = std::collections::HashSet::new();
    for m in missions {
        m.validate()?;
        if !seen.insert(m.node_id.clone()) {
            return Err(RaasError::DuplicateNode(m.node_id.clone()));
        }
    }

    let mission_index: std::collections::HashMap<String, usize> = missions
        .iter()
        .enumerate()
        .map(|(i, m)| (m.node_id.clone(), i))
        .collect();
    let mut placer = Placer {
        grid,
        model,
        missions,
        options,
        assignments: Vec::new(),
        mission_index,
    };
    let mut rejections = Vec::new();

    // (mission index, occurrence, window, deadline-sort key)
    let mut order: Vec<usize> = (0..missions.len()).collect();
    order.sort_by(|&a, &b| {
        (missions[a].priority, &missions[a].node_id)
            .cmp(&(missions[b].priority, &missions[b].node_id))
    });

    match options.policy {
        Policy::GreedyPriority => {
            for &mi in &order {
                let mission = &missions[mi];
                if let Some(rejection) = schedule_whole_mission(&mut placer, mission, grid) {
                    rejections.push(rejection);
                }
            }
        }
        Policy::EarliestDeadline => {
            // All obligations of all missions, earliest window deadline
            // first; a failed obligation rejects its whole mission and
            // releases any windows already granted to it.
            let mut obligations: Vec<(usize, usize, (usize, usize))> = Vec::new();
            for &mi in &order {
                for (k, w) in obligation_windows(&missions[mi], grid).iter().enumerate() {
                    obligations.push((mi, k, *w));
                }
            }
            obligations.sort_by(|a, b| {
                (a.2 .1, missions[a.0].priority, &missions[a.0].node_id, a.1).cmp(&(
                    b.2 .1,
                    missions[b.0].priority,
                    &missions[b.0].node_id,
                    b.1,
                ))
            });
            let mut rejected: std::collections::HashSet<usize> = std::collections::HashSet::new();
            for &(mi, k, window) in &obligations {
                if rejected.contains(&mi) {
                    continue;
                }
                let mission = &missions[mi];
                if let Some(rejection) = admit_one(&mut placer, mission, grid, k, window) {
                    placer.drop_node(&mission.node_id);
                    rejections.push(rejection);
                    rejected.insert(mi);
                }
            }
            // Missions whose period exceeds the horizon have no obligations
            // at all; reject them explicitly.
            for &mi in &order {
                let mission = &missions[mi];
                if !rejected.contains(&mi) && obligation_windows(mission, grid).is_empty() {
                    rejections.push(period_exceeds_horizon(mission, grid));
                }
            }
        }
    }

    let assignments = placer.assignments;
    let utilization = compute_utilization(grid, &assignments);
    Ok(SensingSchedule {
        assignments,
        rejections,
        utilization,
    })
}

fn eligible_bands(mission: &MissionProfile, grid: &SlotGrid) -> Vec<usize> {
    grid.bands
        .iter()
        .enumerate()
        .filter(|(_, b)| b.width_hz >= mission.required_bandwidth_hz)
        .map(|(i, _)| i)
        .collect()
}

fn period_exceeds_horizon(mission: &MissionProfile, grid: &SlotGrid) -> Rejection {
    Rejection {
        node_id: mission.node_id.clone(),
        reason: RejectReason::Capacity,
        detail: format!(
            "period {} slots exceeds the {}-slot horizon",
            mission.period_slots,
            grid.total_slots()
        ),
    }
}

fn schedule_whole_mission(
    placer: &mut Placer<'_>,
    mission: &MissionProfile,
    grid: &SlotGrid,
) -> Option<Rejection> {
    let windows = obligation_windows(mission, grid);
    if windows.is_empty() {
        return Some(period_exceeds_horizon(mission, grid));
    }
    for (k, window) in windows.iter().enumerate() {
        if let Some(rejection) = admit_one(placer, mission, grid, k, *window) {
            placer.drop_node(&mission.node_id);
            return Some(rejection);
        }
    }
    None
}

fn admit_one(
    placer: &mut Placer<'_>,
    mission: &MissionProfile,
    grid: &SlotGrid,
    occurrence: usize,
    window: (usize, usize),
) -> Option<Rejection> {
    let bands = eligible_bands(mission, grid);
    if bands.is_empty() {
        return Some(Rejection {
            node_id: mission.node_id.clone(),
            reason: RejectReason::Bandwidth,
            detail: format!(
                "no band offers the required {} Hz",
                mission.required_bandwidth_hz
            ),
        });
    }
    match placer.place_occurrence(mission, occurrence, window, &bands) {
        Ok(()) => None,
        Err(PlaceFailure::NoCandidates) => Some(Rejection {
            node_id: mission.node_id.clone(),
            reason: RejectReason::Capacity,
            detail: format!(
                "window of {} slots does not fit inside occurrence {} of [{}, {})",
                mission.window_length_slots, occurrence, window.0, window.1
            ),
        }),
        Err(PlaceFailure::Occupied) => Some(Rejection {
            node_id: mission.node_id.clone(),
            reason: RejectReason::Capacity,
            detail: format!(
                "no free conflict-free cell left for occurrence {occurrence}"
            ),
        }),
        Err(PlaceFailure::CumulativeSinr) => Some(Rejection {
            node_id: mission.node_id.clone(),
            reason: RejectReason::Interference,
            detail: format!(
                "aggregate co-channel interference breaks the {} dB guarantee at occurrence {occurrence}",
                mission.required_sinr_db
            ),
        }),
    }
}

fn compute_utilization(grid: &SlotGrid, assignments: &[Assignment]) -> Vec<f64> {
    let total = grid.total_slots() as f64;
    let mut used: Vec<std::collections::HashSet<usize>> =
        vec![std::collections::HashSet::new(); grid.bands.len()];
    for a in assignments {
        let (s, e) = a.global_range(grid);
        for t in s..e {
            used[a.band].insert(t);
        }
    }
    used.into_iter()
        .map(|set| set.len() as f64 / total)
        .collect()
}

/// One problem found by the verifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ConflictItem {
    UnknownNode {
        node_id: String,
    },
    OutOfBounds {
        node_id: String,
        frame: usize,
        slot_end: usize,
        band: usize,
    },
    WrongWindowLength {
        node_id: String,
        got: usize,
        want: usize,
    },
    BandTooNarrow {
        node_id: String,
        band: usize,
    },
    BlockedOverlap {
        node_id: String,
        frame: usize,
        slot: usize,
        band: usize,
    },
    PairConflict {
        node_a: String,
        node_b: String,
        band: usize,
    },
    MissedPeriod {
        node_id: String,
        occurrence: usize,
    },
    ExtraAssignment {
        node_id: String,
        occurrence: usize,
    },
    OutsideWindow {
        node_id: String,
        occurrence: usize,
    },
    StatusInconsistent {
        node_id: String,
        detail: String,
    },
    UtilizationMismatch {
        band: usize,
        got: f64,
        want: f64,
    },
}

/// Independent exhaustive re-check of a schedule against its inputs.
///
/// Examines every assignment pair, every periodic obligation, every blocked
/// cell, and the utilization bookkeeping. An empty report is the
/// correctness certificate for `build_schedule`.
pub fn verify_schedule(
    grid: &SlotGrid,
    missions: &[MissionProfile],
    model: &InterferenceModel,
    schedule: &SensingSchedule,
) -> Vec<ConflictItem> {
    let mut items = Vec::new();
    let by_node: std::collections::HashMap<&str, &MissionProfile> =
        missions.iter().map(|m| (m.node_id.as_str(), m)).collect();

    for a in &schedule.assignments {
        let Some(mission) = by_node.get(a.node_id.as_str()) else {
            items.push(ConflictItem::UnknownNode {
                node_id: a.node_id.clone(),
            });
            continue;
        };
        if a.frame >= grid.horizon_frames
            || a.slot_end > grid.n_slots_per_frame
            || a.band >= grid.bands.len()
            || a.slot_start >= a.slot_end
        {
            items.push(ConflictItem::OutOfBounds {
                node_id: a.node_id.clone(),
                frame: a.frame,
                slot_end: a.slot_end,
                band: a.band,
            });
            continue;
        }
        if a.slot_end - a.slot_start != mission.window_length_slots {
            items.push(ConflictItem::WrongWindowLength {
                node_id: a.node_id.clone(),
                got: a.slot_end - a.slot_start,
                want: mission.window_length_slots,
            });
        }
        if grid.bands[a.band].width_hz < mission.required_bandwidth_hz {
            items.push(ConflictItem::BandTooNarrow {
                node_id: a.node_id.clone(),
                band: a.band,
            });
        }
        for b in &grid.blocked {
            if b.band == a.band
                && b.frame == a.frame
                && b.slot >= a.slot_start
                && b.slot < a.slot_end
            {
                items.push(ConflictItem::BlockedOverlap {
                    node_id: a.node_id.clone(),
                    frame: b.frame,
                    slot: b.slot,
                    band: b.band,
                });
            }
        }
    }

    for (i, a) in schedule.assignments.iter().enumerate() {
        for b in schedule.assignments.iter().skip(i + 1) {
            let (asr, aer) = a.global_range(grid);
            let (bsr, ber) = b.global_range(grid);
            let overlap = asr < ber && bsr < aer;
            if !overlap {
                continue;
            }
            let same_node = a.node_id == b.node_id;
            let both_known = by_node.contains_key(a.node_id.as_str())
                && by_node.contains_key(b.node_id.as_str());
            let clash = same_node
                || (a.band == b.band
                    && both_known
                    && interferes(
                        by_node[a.node_id.as_str()],
                        by_node[b.node_id.as_str()],
                        model,
                    ));
            if clash {
                items.push(ConflictItem::PairConflict {
                    node_a: a.node_id.clone(),
                    node_b: b.node_id.clone(),
                    band: a.band,
                });
            }
        }
    }

    // Periodic obligations: granted missions need exactly one assignment per
    // full period, inside its window.
    let rejected: std::collections::HashSet<&str> = schedule
        .rejections
        .iter()
        .map(|r| r.node_id.as_str())
        .collect();
    for mission in missions {
        let node = mission.node_id.as_str();
        let mine: Vec<&Assignment> = schedule
            .assignments
            .iter()
            .filter(|a| a.node_id == node)
            .collect();
        if rejected.contains(node) {
            if !mine.is_empty() {
                items.push(ConflictItem::StatusInconsistent {
                    node_id: mission.node_id.clone(),
                    detail: "mission is both rejected and assigned".into(),
                });
            }
            continue;
        }
        let windows = obligation_windows(mission, grid);
        if windows.is_empty() {
            items.push(ConflictItem::StatusInconsistent {
                node_id: mission.node_id.clone(),
                detail: "mission has no schedulable occurrence and no rejection".into(),
            });
            continue;
        }
        for (k, window) in windows.iter().enumerate() {
            let in_window: Vec<&&Assignment> = mine
                .iter()
                .filter(|a| {
                    let (s, e) = a.global_range(grid);
                    a.occurrence == k && s >= window.0 && e <= window.1
                })
                .collect();
            match in_window.len() {
                0 => items.push(ConflictItem::MissedPeriod {
                    node_id: mission.node_id.clone(),
                    occurrence: k,
                }),
                1 => {}
                _ => items.push(ConflictItem::ExtraAssignment {
                    node_id: mission.node_id.clone(),
                    occurrence: k,
                }),
            }
        }
        for a in &mine {
            if a.occurrence >= windows.len() {
                items.push(ConflictItem::OutsideWindow {
                    node_id: mission.node_id.clone(),
                    occurrence: a.occurrence,
                });
            }
        }
    }

    let want = compute_utilization(grid, &schedule.assignments);
    for (band, (&got, &expect)) in schedule.utilization.iter().zip(&want).enumerate() {
        if !(0.0..=1.0).contains(&got) || (got - expect).abs() > 1e-12 {
            items.push(ConflictItem::UtilizationMismatch {
                band,
                got,
                want: expect,
            });
        }
    }

    items
}

/// Theoretical range resolution `c / (2B)` of a radar bandwidth.
pub fn range_resolution_m(bandwidth_hz: f64) -> Result<f64, RaasError> {
    if !(bandwidth_hz > 0.0) {
        return Err(RaasError::NonPositiveBandwidth(bandwidth_hz));
    }
    Ok(SPEED_OF_LIGHT / (2.0 * bandwidth_hz))
}
