//! One interactive game plus its append-only log.
//!
//! The log holds one JSON object per line: a `create` entry followed by one
//! entry per sub-step. Replaying it re-runs the engine strategies (which are
//! deterministic given the seed) and re-submits the human moves.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use axum::http::StatusCode;
use pyreline_core::engine::{BuilderMove, Game, Role, Stage, TurnRecord};
use pyreline_core::graph::VertexId;
use pyreline_core::schedule::{GrowthSchedule, ScheduleDescriptor};
use pyreline_core::strategies::{arsonist_with_config, builder_by_name, PhaseConfig, HUMAN};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::ApiError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HumanRole {
    Builder,
    Arsonist,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateRequest {
    pub schedule: ScheduleDescriptor,
    pub human_role: HumanRole,
    pub builder: String,
    pub arsonist: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warmup: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum LogEntry {
    Create { id: String, request: CreateRequest },
    Builder { turn: u64, human: bool, count: usize, edges: Vec<(VertexId, VertexId)> },
    Arsonist { turn: u64, human: bool, vertex: Option<VertexId> },
}

/// A move as the client sends it: `{count, edges}` for Builder,
/// `{vertex}` (null to pass) for Arsonist.
#[derive(Debug, Clone, PartialEq)]
pub enum HumanMove {
    Builder(BuilderMove),
    Arsonist(Option<VertexId>),
}

impl HumanMove {
    pub fn from_json(v: &Value) -> Result<Self, ApiError> {
        let obj = v
            .as_object()
            .ok_or_else(|| ApiError::bad_request("BadMove", "move must be a JSON object"))?;
        if obj.contains_key("count") {
            let mv: BuilderMove = serde_json::from_value(v.clone())
                .map_err(|e| ApiError::bad_request("BadMove", format!("builder move: {e}")))?;
            Ok(HumanMove::Builder(mv))
        } else if let Some(vertex) = obj.get("vertex") {
            if obj.len() > 1 {
                return Err(ApiError::bad_request("BadMove", "arsonist move takes only `vertex`"));
            }
            let vertex: Option<VertexId> = serde_json::from_value(vertex.clone())
                .map_err(|e| ApiError::bad_request("BadMove", format!("field `vertex`: {e}")))?;
            Ok(HumanMove::Arsonist(vertex))
        } else {
            Err(ApiError::bad_request(
                "BadMove",
                "expected {count, edges} for Builder or {vertex} for Arsonist",
            ))
        }
    }

    fn role(&self) -> Role {
        match self {
            HumanMove::Builder(_) => Role::Builder,
            HumanMove::Arsonist(_) => Role::Arsonist,
        }
    }
}

pub struct Session {
    pub id: String,
    pub request: CreateRequest,
    game: Game,
    /// Turn on which each vertex caught fire.
    burned_at: Vec<u64>,
    log: Option<(PathBuf, File)>,
}

fn role_mismatch(message: String) -> ApiError {
    ApiError::new(StatusCode::BAD_REQUEST, "RoleMismatch", message, Value::Null)
}

fn build_game(req: &CreateRequest) -> Result<Game, ApiError> {
    let schedule = GrowthSchedule::new(req.schedule.clone()).map_err(|e| {
        ApiError::new(
            StatusCode::BAD_REQUEST,
            "BadSchedule",
            e.to_string(),
            json!({ "field": "schedule" }),
        )
    })?;
    for (side, name, role) in [
        ("builder", &req.builder, HumanRole::Builder),
        ("arsonist", &req.arsonist, HumanRole::Arsonist),
    ] {
        let is_human = name == HUMAN;
        if is_human && req.human_role != role {
            return Err(role_mismatch(format!(
                "{side} is `human` but human_role is {:?}",
                req.human_role
            )));
        }
        if !is_human && req.human_role == role {
            return Err(role_mismatch(format!("human_role is {side} but {side} is `{name}`")));
        }
    }
    let bad_strategy = |field: &str, e: String| {
        ApiError::new(StatusCode::BAD_REQUEST, "BadStrategy", e, json!({ "field": field }))
    };
    let builder = if req.builder == HUMAN {
        None
    } else {
        Some(builder_by_name(&req.builder, req.seed).map_err(|e| bad_strategy("builder", e.to_string()))?)
    };
    let mut phase = PhaseConfig::default();
    if let Some(w) = req.warmup {
        if w == 0 {
            return Err(bad_strategy("warmup", "warmup must be at least 1".into()));
        }
        phase.warmup = w;
    }
    let arsonist = if req.arsonist == HUMAN {
        None
    } else {
        Some(
            arsonist_with_config(&req.arsonist, req.seed, phase)
                .map_err(|e| bad_strategy("arsonist", e.to_string()))?,
        )
    };
    Ok(Game::new(schedule, builder, arsonist, req.seed))
}

/// Whether the Arsonist sub-step can run without a human: either an engine
/// strategy plays it, or nothing is left unburned and the pass is forced.
fn arsonist_is_automatic(game: &Game) -> bool {
    game.arsonist().is_some() || game.burn().unburned_count() == 0
}

impl Session {
    pub fn create(id: String, request: CreateRequest, data_dir: Option<&Path>) -> Result<Self, ApiError> {
        let game = build_game(&request)?;
        let log = match data_dir {
            Some(dir) => {
                let path = dir.join(format!("{id}.jsonl"));
                let file = OpenOptions::new()
                    .create_new(true)
                    .append(true)
                    .open(&path)
                    .map_err(|e| ApiError::internal(format!("{}: {e}", path.display())))?;
                Some((path, file))
            }
            None => None,
        };
        let mut session = Session {
            id: id.clone(),
            request: request.clone(),
            game,
            burned_at: Vec::new(),
            log,
        };
        session.append(&LogEntry::Create { id, request })?;
        if session.request.human_role != HumanRole::None {
            session.advance()?;
        }
        Ok(session)
    }

    /// Rebuilds a session from its log file and reopens it for appending.
    pub fn replay(path: &Path) -> Result<Self, String> {
        let file = File::open(path).map_err(|e| e.to_string())?;
        let mut lines = BufReader::new(file).lines();
        let first = lines
            .next()
            .ok_or("empty log")?
            .map_err(|e| e.to_string())?;
        let LogEntry::Create { id, request } = serde_json::from_str(&first).map_err(|e| e.to_string())? else {
            return Err("log does not start with a create entry".into());
        };
        let game = build_game(&request).map_err(|e| e.message)?;
        let mut session = Session {
            id,
            request,
            game,
            burned_at: Vec::new(),
            log: None,
        };
        for (i, line) in lines.enumerate() {
            let line = line.map_err(|e| e.to_string())?;
            if line.trim().is_empty() {
                continue;
            }
            let entry: LogEntry = serde_json::from_str(&line).map_err(|e| format!("line {}: {e}", i + 2))?;
            session
                .apply_logged(&entry)
                .map_err(|e| format!("line {}: {e}", i + 2))?;
        }
        let file = OpenOptions::new()
            .append(true)
            .open(path)
            .map_err(|e| e.to_string())?;
        session.log = Some((path.to_path_buf(), file));
        Ok(session)
    }

    fn apply_logged(&mut self, entry: &LogEntry) -> Result<(), String> {
        match entry {
            LogEntry::Create { .. } => Err("duplicate create entry".into()),
            LogEntry::Builder {
                human, count, edges, ..
            } => {
                if *human {
                    let mv = BuilderMove {
                        count: *count,
                        edges: edges.clone(),
                    };
                    let newly = self.game.submit_builder_move(&mv).map_err(|e| e.to_string())?;
                    self.note_burned(&newly);
                } else {
                    self.engine_builder().map_err(|e| e.message)?;
                    let gen = self.game.graph().generation(self.game.graph().generation_count() - 1);
                    let got = gen.map(|g| g.vertices.len());
                    if got != Some(*count) {
                        return Err(format!("engine Builder diverged from the log: {got:?} vs {count}"));
                    }
                }
                Ok(())
            }
            LogEntry::Arsonist { human, vertex, .. } => {
                let rec = if *human {
                    let rec = self.game.submit_ignition(*vertex).map_err(|e| e.to_string())?;
                    self.note_source(&rec);
                    rec
                } else {
                    self.engine_arsonist().map_err(|e| e.message)?
                };
                if rec.source != *vertex {
                    return Err(format!("Arsonist diverged from the log: {:?} vs {vertex:?}", rec.source));
                }
                Ok(())
            }
        }
    }

    fn append(&mut self, entry: &LogEntry) -> Result<(), ApiError> {
        if let Some((path, file)) = self.log.as_mut() {
            let line = serde_json::to_string(entry).expect("log entry serializes");
            writeln!(file, "{line}")
                .and_then(|_| file.flush())
                .map_err(|e| ApiError::internal(format!("{}: {e}", path.display())))?;
        }
        Ok(())
    }

    pub fn log_path(&self) -> Option<&Path> {
        self.log.as_ref().map(|(p, _)| p.as_path())
    }

    pub fn game(&self) -> &Game {
        &self.game
    }

    fn current_turn(&self) -> u64 {
        self.game.view().turn
    }

    fn note_burned(&mut self, newly: &[VertexId]) {
        let n = self.game.graph().vertex_count();
        self.burned_at.resize(n, 0);
        let turn = self.current_turn();
        for &v in newly {
            self.burned_at[v as usize] = turn;
        }
    }

    fn note_source(&mut self, rec: &TurnRecord) {
        if let Some(v) = rec.source {
            self.burned_at[v as usize] = rec.turn;
        }
    }

    fn engine_builder(&mut self) -> Result<(), ApiError> {
        let newly = self.game.auto_builder()?;
        self.note_burned(&newly);
        Ok(())
    }

    fn engine_arsonist(&mut self) -> Result<TurnRecord, ApiError> {
        let rec = self.game.auto_arsonist()?;
        self.note_source(&rec);
        Ok(rec)
    }

    fn log_builder_step(&mut self, human: bool) -> Result<(), ApiError> {
        let g = self.game.graph();
        let gen = g.generation(g.generation_count() - 1).expect("a generation was just added");
        let entry = LogEntry::Builder {
            turn: gen.turn,
            human,
            count: gen.vertices.len(),
            edges: gen.edges.map(|e| g.edge(e)).collect(),
        };
        self.append(&entry)
    }

    fn log_arsonist_step(&mut self, rec: &TurnRecord, human: bool) -> Result<(), ApiError> {
        self.append(&LogEntry::Arsonist {
            turn: rec.turn,
            human,
            vertex: rec.source,
        })
    }

    /// Whose sub-step is next, and whether a human has to supply it.
    pub fn next_step(&self) -> (Role, bool) {
        match self.game.awaiting() {
            Role::Builder => (Role::Builder, self.game.builder().is_none()),
            Role::Arsonist => (Role::Arsonist, !arsonist_is_automatic(&self.game)),
        }
    }

    /// Plays engine sub-steps until a human decision is needed or a turn
    /// completes; returns the completed turn's record, if any.
    pub fn advance(&mut self) -> Result<Option<TurnRecord>, ApiError> {
        loop {
            match self.next_step() {
                (Role::Builder, true) => {
                    // Fix f(n) now so the client can see how many vertices to add.
                    self.game.required_count()?;
                    return Ok(None);
                }
                (Role::Arsonist, true) => return Ok(None),
                (Role::Builder, false) => {
                    self.engine_builder()?;
                    self.log_builder_step(false)?;
                }
                (Role::Arsonist, false) => {
                    let rec = self.engine_arsonist()?;
                    self.log_arsonist_step(&rec, false)?;
                    return Ok(Some(rec));
                }
            }
        }
    }

    /// Plays up to `turns` turns of engine sub-steps, stopping early when a
    /// human move is needed.
    pub fn step(&mut self, turns: u64) -> Result<Vec<TurnRecord>, ApiError> {
        let mut out = Vec::new();
        for _ in 0..turns {
            match self.advance()? {
                Some(rec) => out.push(rec),
                None => break,
            }
        }
        if out.is_empty() && turns > 0 {
            let (role, _) = self.next_step();
            return Err(pyreline_core::engine::EngineError::HumanMoveRequired(role).into());
        }
        Ok(out)
    }

    /// Applies a human move, then lets the engine play on until the human
    /// is needed again or the turn completes.
    pub fn submit(&mut self, mv: &HumanMove) -> Result<Vec<TurnRecord>, ApiError> {
        let (awaiting, human) = self.next_step();
        let got = mv.role();
        let human_side = match self.request.human_role {
            HumanRole::Builder => Some(Role::Builder),
            HumanRole::Arsonist => Some(Role::Arsonist),
            HumanRole::None => None,
        };
        if got != awaiting || !human || human_side != Some(got) {
            return Err(ApiError::new(
                StatusCode::CONFLICT,
                "NotYourTurn",
                format!("the game is waiting for the {awaiting} (engine: {})", !human),
                json!({ "awaiting": awaiting, "got": got, "human": human }),
            ));
        }
        let mut completed = Vec::new();
        match mv {
            HumanMove::Builder(m) => {
                let newly = self.game.submit_builder_move(m)?;
                self.note_burned(&newly);
                self.log_builder_step(true)?;
            }
            HumanMove::Arsonist(v) => {
                let rec = self.game.submit_ignition(*v)?;
                self.note_source(&rec);
                self.log_arsonist_step(&rec, true)?;
                completed.push(rec);
            }
        }
        if let Some(rec) = self.advance()? {
            completed.push(rec);
        }
        Ok(completed)
    }

    /// State, or only what changed after turn `since`.
    pub fn state(&self, since: Option<u64>) -> Value {
        let g = self.game.graph();
        let after = since.unwrap_or(0);
        let first_gen = (0..g.generation_count())
            .find(|&i| g.generation(i).is_some_and(|gen| gen.turn > after))
            .unwrap_or(g.generation_count());
        let (first_vertex, first_edge) = match g.generation(first_gen) {
            Some(gen) => (gen.vertices.start, gen.edges.start),
            None => (g.vertex_count() as VertexId, g.edge_count() as u32),
        };
        let flags = self.game.burn().flags();
        let vertices: Vec<Value> = (first_vertex..g.vertex_count() as VertexId)
            .map(|v| {
                json!({
                    "id": v,
                    "generation": g.generation_of(v),
                    "burning": flags.get(v as usize).copied().unwrap_or(false),
                })
            })
            .collect();
        let edges: Vec<[VertexId; 2]> = (first_edge..g.edge_count() as u32)
            .map(|e| {
                let (a, b) = g.edge(e);
                [a, b]
            })
            .collect();
        let ignited: Vec<VertexId> = self
            .burned_at
            .iter()
            .enumerate()
            .filter(|&(v, &t)| t > after && (v as VertexId) < first_vertex)
            .map(|(v, _)| v as VertexId)
            .collect();
        let records: Vec<Value> = self
            .game
            .trace()
            .iter()
            .filter(|r| r.turn > after)
            .map(record_json)
            .collect();
        let (next, human) = self.next_step();
        let awaiting = match (next, human) {
            (Role::Builder, true) => "builder-move",
            (Role::Arsonist, true) => "arsonist-move",
            _ => "none",
        };
        let required = match self.game.stage() {
            Stage::AwaitBuilder { required, .. } => Some(required),
            _ => None,
        };
        json!({
            "id": self.id,
            "human_role": self.request.human_role,
            "builder": self.request.builder,
            "arsonist": self.request.arsonist,
            "seed": self.request.seed,
            "turn": self.current_turn(),
            "turns_completed": self.game.turns_completed(),
            "next": next,
            "awaiting": awaiting,
            "required": required,
            "vertex_total": g.vertex_count(),
            "burning_total": self.game.burn().burning_count(),
            "since": since,
            "vertices": vertices,
            "edges": edges,
            "ignited": ignited,
            "records": records,
        })
    }
}

pub fn record_json(r: &TurnRecord) -> Value {
    serde_json::from_str(&pyreline_core::engine::jsonl_line(r)).expect("record line is JSON")
}
