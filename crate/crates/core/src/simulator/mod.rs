//! End-to-end execution of a scheme on synthetic files.
//!
//! The simulator only trusts the node-placement array and the user-to-node
//! access lists when filling caches; the user-delivery array decides what is
//! sent. Decoding then checks, byte for byte, that every user recovers its
//! file from its own caches and the transmitted symbols.

mod library;
mod transcript;


use serde::Serialize;

pub use library::{DemandVector, Library, DEFAULT_PACKET_LEN};
pub use transcript::Transcript;

use crate::error::{Error, Result};
use crate::gf;
use crate::math::{ratio, Rational};
use crate::pda::Entry;
use crate::scheme::MaccScheme;

/// Delivery mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// One XOR message per message id.
    Plain,
    /// `S − λS′` GF(2^16) combinations of the XOR messages.
    Mds,
}

/// Packets held by each cache-node. Node `γ` keeps the rows starred in
/// column `γ` of `C` and, for every file, those packets back to back.
#[derive(Debug, Clone)]
pub struct NodeCaches {
    packet_len: usize,
    nodes: Vec<NodeStore>,
}

#[derive(Debug, Clone)]
struct NodeStore {
    rows: Vec<usize>,
    data: Vec<u8>,
}

impl NodeCaches {
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Rows (0-based packet indices) stored at a node, for every file.
    pub fn rows(&self, node: usize) -> &[usize] {
        &self.nodes[node].rows
    }

    pub fn bytes(&self, node: usize) -> usize {
        self.nodes[node].data.len()
    }

    /// Packet `W_{file, packet}` as held by `node`.
    pub fn packet(&self, node: usize, file: u32, packet: usize) -> Option<&[u8]> {
        let n = &self.nodes[node];
        let pos = n.rows.binary_search(&packet).ok()?;
        let start = ((file as usize - 1) * n.rows.len() + pos) * self.packet_len;
        n.data.get(start..start + self.packet_len)
    }

    /// A packet as read through the given nodes.
    fn lookup(&self, nodes: &[usize], file: u32, packet: usize) -> Option<&[u8]> {
        nodes.iter().find_map(|&n| self.packet(n, file, packet))
    }
}

/// Fills node `γ` with every packet whose row is starred in column `γ` of `C`.
pub fn place(library: &Library, scheme: &impl MaccScheme) -> Result<NodeCaches> {
    let c = scheme.node_placement();
    if library.packets_per_file() != c.num_rows() {
        return Err(Error::InvalidInput(format!(
            "library has {} packets per file, the scheme needs F={}",
            library.packets_per_file(),
            c.num_rows()
        )));
    }
    let nodes = (0..c.num_cols())
        .map(|g| {
            let rows = c.star_rows(g);
            let mut data = Vec::with_capacity(rows.len() * library.num_files() * library.packet_len());
            for n in 1..=library.num_files() as u32 {
                for &j in &rows {
                    data.extend_from_slice(library.packet(n, j));
                }
            }
            NodeStore { rows, data }
        })
        .collect();
    Ok(NodeCaches {
        packet_len: library.packet_len(),
        nodes,
    })
}

/// Packet `W_{file, packet}` wanted by `user` inside a message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PacketRef {
    pub user: usize,
    pub file: u32,
    pub packet: usize,
}

/// What the server sends for one demand vector.
#[derive(Debug, Clone)]
pub struct TransmissionPlan {
    pub mode: Mode,
    pub demands: DemandVector,
    /// Packets XORed into message `s` (index `s − 1`), row-major cell order.
    pub structure: Vec<Vec<PacketRef>>,
    /// Number of messages every user is assumed to know (`λS′`; zero for plain).
    pub redundancy: usize,
    /// Transmitted symbols: the XOR messages (plain) or their coded combinations (mds).
    pub symbols: Vec<Vec<u8>>,
    pub subpacketization: usize,
    pub users: usize,
    pub packet_len: usize,
}

impl TransmissionPlan {
    pub fn num_messages(&self) -> usize {
        self.structure.len()
    }

    pub fn symbols_sent(&self) -> usize {
        self.symbols.len()
    }

    /// `symbols / F`.
    pub fn load(&self) -> Rational {
        ratio(self.symbols.len() as i128, self.subpacketization as i128)
    }

    pub fn transcript(&self) -> Transcript {
        Transcript {
            mode: self.mode,
            s: self.structure.len() as u32,
            f: self.subpacketization as u32,
            k: self.users as u32,
            field: matches!(self.mode, Mode::Mds) as u8,
            symbols: self.symbols.clone(),
        }
    }
}

fn structure(scheme: &impl MaccScheme, demands: &DemandVector) -> Vec<Vec<PacketRef>> {
    scheme
        .delivery()
        .cells_by_id()
        .into_values()
        .map(|cells| {
            cells
                .into_iter()
                .map(|(j, k)| PacketRef {
                    user: k,
                    file: demands.0[k],
                    packet: j,
                })
                .collect()
        })
        .collect()
}

fn xor_message(library: &Library, parts: &[PacketRef]) -> Vec<u8> {
    let mut out = vec![0u8; library.packet_len()];
    for p in parts {
        for (o, b) in out.iter_mut().zip(library.packet(p.file, p.packet)) {
            *o ^= b;
        }
    }
    out
}

fn check(scheme: &impl MaccScheme, library: &Library, demands: &DemandVector) -> Result<()> {
    if library.packets_per_file() != scheme.subpacketization() {
        return Err(Error::InvalidInput(format!(
            "library has {} packets per file, the scheme needs F={}",
            library.packets_per_file(),
            scheme.subpacketization()
        )));
    }
    demands.validate(scheme.num_users(), library.num_files())
}

/// One XOR message per message id `s`: `⊕_{Q(j,k)=s} W_{d_k, j}`, in id order.
pub fn deliver_plain(scheme: &impl MaccScheme, library: &Library, demands: &DemandVector) -> Result<TransmissionPlan> {
    check(scheme, library, demands)?;
    let structure = structure(scheme, demands);
    let symbols = structure.iter().map(|parts| xor_message(library, parts)).collect();
    Ok(TransmissionPlan {
        mode: Mode::Plain,
        demands: demands.clone(),
        structure,
        redundancy: 0,
        symbols,
        subpacketization: scheme.subpacketization(),
        users: scheme.num_users(),
        packet_len: library.packet_len(),
    })
}

/// Rows of the packets a user reads from its nodes.
fn retrieved_rows(scheme: &impl MaccScheme, user: usize) -> Vec<bool> {
    let c = scheme.node_placement();
    let mut rows = vec![false; c.num_rows()];
    for g in scheme.user_nodes(user) {
        for j in c.star_rows(g) {
            rows[j] = true;
        }
    }
    rows
}

/// Messages (0-based) a user can rebuild entirely from the packets it reads.
pub fn reconstructible(scheme: &impl MaccScheme, user: usize) -> Vec<usize> {
    let rows = retrieved_rows(scheme, user);
    message_rows(scheme)
        .iter()
        .enumerate()
        .filter(|(_, cells)| cells.iter().all(|&j| rows[j]))
        .map(|(s, _)| s)
        .collect()
}

/// Number of reconstructible messages for every user.
pub fn known_counts(scheme: &impl MaccScheme) -> Vec<usize> {
    let messages = message_rows(scheme);
    (0..scheme.num_users())
        .map(|u| {
            let rows = retrieved_rows(scheme, u);
            messages.iter().filter(|cells| cells.iter().all(|&j| rows[j])).count()
        })
        .collect()
}

/// Rows of the cells carrying each message, in id order.
fn message_rows(scheme: &impl MaccScheme) -> Vec<Vec<usize>> {
    scheme
        .delivery()
        .cells_by_id()
        .into_values()
        .map(|cells| cells.into_iter().map(|(j, _)| j).collect())
        .collect()
}

/// Sends `S − λS′` combinations `Y_i = Σ_s G_{i,s} X_s` of the XOR messages
/// over GF(2^16), with `G` a Cauchy matrix.
///
/// Refuses when some user can rebuild fewer than `λS′` messages from its
/// caches, since that user could not decode.
pub fn deliver_mds(scheme: &impl MaccScheme, library: &Library, demands: &DemandVector) -> Result<TransmissionPlan> {
    deliver_mds_with(scheme, library, demands, &known_counts(scheme))
}

fn deliver_mds_with(
    scheme: &impl MaccScheme,
    library: &Library,
    demands: &DemandVector,
    known: &[usize],
) -> Result<TransmissionPlan> {
    let plain = deliver_plain(scheme, library, demands)?;
    let s = plain.structure.len();
    let r = scheme.mds_redundancy().min(s);
    let rows = s - r;
    if s + rows > gf::ORDER - 1 {
        return Err(Error::FieldTooSmall {
            required: s + rows,
            available: gf::ORDER - 1,
        });
    }
    for (user, &known) in known.iter().enumerate() {
        if known < r {
            return Err(Error::ReductionGuarantee {
                user,
                known,
                required: r,
            });
        }
    }
    let g = gf::cauchy(rows, s);
    let words: Vec<Vec<u16>> = plain.symbols.iter().map(|x| gf::bytes_to_words(x)).collect();
    // Coded symbols keep whole field words, one byte longer than the packet
    // when its length is odd.
    let len = library.packet_len().div_ceil(2) * 2;
    let symbols = g
        .iter()
        .map(|row| {
            let mut acc = vec![0u16; words.first().map_or(0, Vec::len)];
            for (c, x) in row.iter().zip(&words) {
                gf::mul_add(&mut acc, *c, x);
            }
            gf::words_to_bytes(&acc, len)
        })
        .collect();
    Ok(TransmissionPlan {
        mode: Mode::Mds,
        redundancy: r,
        symbols,
        ..plain
    })
}

/// Recovers the file demanded by `user` from its caches and the plan.
pub fn decode(
    scheme: &impl MaccScheme,
    user: usize,
    plan: &TransmissionPlan,
    caches: &NodeCaches,
) -> Result<Vec<u8>> {
    let nodes = scheme.user_nodes(user);
    let cache = |file: u32, packet: usize| caches.lookup(&nodes, file, packet);
    let messages = message_payloads(user, plan, &cache)?;
    let q = scheme.delivery();
    let file = plan.demands.0[user];
    let mut out = Vec::new();
    for j in 0..scheme.subpacketization() {
        if let Some(p) = cache(file, j) {
            out.extend_from_slice(p);
            continue;
        }
        let s = match q.get(j, user) {
            Entry::Id(s) => *s,
            Entry::Star => return Err(Error::Decode { user, message: 0 }),
        };
        let mut packet = messages[s as usize - 1]
            .clone()
            .ok_or(Error::Decode { user, message: s })?;
        for part in &plan.structure[s as usize - 1] {
            if part.user == user {
                continue;
            }
            let side = cache(part.file, part.packet).ok_or(Error::Decode { user, message: s })?;
            for (o, b) in packet.iter_mut().zip(side.iter()) {
                *o ^= b;
            }
        }
        out.extend_from_slice(&packet);
    }
    Ok(out)
}

/// The XOR messages available to a user: all of them in plain mode, and in
/// mds mode the ones it rebuilds from cache plus those solved from the coded
/// symbols.
fn message_payloads<'a>(
    user: usize,
    plan: &TransmissionPlan,
    cache: &impl Fn(u32, usize) -> Option<&'a [u8]>,
) -> Result<Vec<Option<Vec<u8>>>> {
    if plan.mode == Mode::Plain {
        return Ok(plan.symbols.iter().cloned().map(Some).collect());
    }
    let s = plan.structure.len();
    let len = plan.packet_len;
    let mut known: Vec<Option<Vec<u8>>> = plan
        .structure
        .iter()
        .map(|parts| {
            let mut acc = vec![0u8; len];
            for p in parts {
                let bytes = cache(p.file, p.packet)?;
                for (o, b) in acc.iter_mut().zip(bytes.iter()) {
                    *o ^= b;
                }
            }
            Some(acc)
        })
        .collect();
    let unknown: Vec<usize> = (0..s).filter(|&i| known[i].is_none()).collect();
    if unknown.is_empty() {
        return Ok(known);
    }
    let rows = plan.symbols.len();
    if unknown.len() > rows {
        return Err(Error::Decode {
            user,
            message: unknown[0] as u32 + 1,
        });
    }
    let g = gf::cauchy(rows, s);
    let u = unknown.len();
    let a: Vec<Vec<u16>> = g[..u].iter().map(|row| unknown.iter().map(|&c| row[c]).collect()).collect();
    let b: Vec<Vec<u16>> = (0..u)
        .map(|i| {
            let mut y = gf::bytes_to_words(&plan.symbols[i]);
            for (c, x) in g[i].iter().zip(&known) {
                if let Some(x) = x {
                    gf::mul_add(&mut y, *c, &gf::bytes_to_words(x));
                }
            }
            y
        })
        .collect();
    let solved = gf::solve(a, b).ok_or(Error::Decode {
        user,
        message: unknown[0] as u32 + 1,
    })?;
    for (&idx, words) in unknown.iter().zip(solved) {
        known[idx] = Some(gf::words_to_bytes(&words, len));
    }
    Ok(known)
}

/// Outcome of one simulated delivery.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimulationReport {
    pub mode: Mode,
    pub users: usize,
    pub subpacketization: usize,
    pub messages: usize,
    pub symbols_sent: usize,
    #[serde(serialize_with = "crate::math::ser_rational")]
    pub load: Rational,
    /// `S/F` (plain) or `(S − λS′)/F` (mds) from the arrays.
    #[serde(serialize_with = "crate::math::ser_rational")]
    pub expected_load: Rational,
    pub redundancy: usize,
    /// Fewest messages any user can rebuild from its caches.
    pub min_known: usize,
    /// Most messages any user must learn from the transmission.
    pub max_unknown: usize,
    pub decoded: Vec<bool>,
    pub all_decoded: bool,
    pub failures: Vec<String>,
}

/// A scheme with its caches filled, ready to serve many demand vectors.
pub struct Simulation<'a, S> {
    scheme: &'a S,
    library: &'a Library,
    caches: NodeCaches,
    known: Vec<usize>,
}

impl<'a, S: MaccScheme> Simulation<'a, S> {
    pub fn new(scheme: &'a S, library: &'a Library) -> Result<Self> {
        Ok(Self {
            caches: place(library, scheme)?,
            known: known_counts(scheme),
            scheme,
            library,
        })
    }

    pub fn caches(&self) -> &NodeCaches {
        &self.caches
    }

    /// Delivers and decodes for one demand vector.
    pub fn run(&self, demands: &DemandVector, mode: Mode) -> Result<SimulationReport> {
        let (scheme, library) = (self.scheme, self.library);
        let plan = match mode {
            Mode::Plain => deliver_plain(scheme, library, demands)?,
            Mode::Mds => deliver_mds_with(scheme, library, demands, &self.known)?,
        };
        let mut decoded = Vec::with_capacity(scheme.num_users());
        let mut failures = Vec::new();
        for user in 0..scheme.num_users() {
            match decode(scheme, user, &plan, &self.caches) {
                Ok(bytes) if bytes == library.file(demands.0[user]) => decoded.push(true),
                Ok(_) => {
                    decoded.push(false);
                    failures.push(format!("user {} decoded wrong bytes", user + 1));
                }
                Err(e) => {
                    decoded.push(false);
                    failures.push(e.to_string());
                }
            }
        }
        let s = plan.num_messages();
        let min_known = self.known.iter().copied().min().unwrap_or(0);
        Ok(SimulationReport {
            mode,
            users: scheme.num_users(),
            subpacketization: scheme.subpacketization(),
            messages: s,
            symbols_sent: plan.symbols_sent(),
            load: plan.load(),
            expected_load: ratio((s - plan.redundancy) as i128, scheme.subpacketization() as i128),
            redundancy: plan.redundancy,
            min_known,
            max_unknown: s - min_known.min(s),
            all_decoded: decoded.iter().all(|&d| d),
            decoded,
            failures,
        })
    }
}

/// Places, delivers and decodes for one demand vector.
pub fn simulate(
    scheme: &impl MaccScheme,
    library: &Library,
    demands: &DemandVector,
    mode: Mode,
) -> Result<SimulationReport> {
    Simulation::new(scheme, library)?.run(demands, mode)
}

/// Runs the distinct-demand vector `d = (1, …, K)`.
pub fn measure_worst_case(scheme: &impl MaccScheme, library: &Library, mode: Mode) -> Result<SimulationReport> {
    let k = scheme.num_users();
    if library.num_files() < k {
        return Err(Error::InvalidParameters(format!(
            "distinct demands need N ≥ K, got N={}, K={k}",
            library.num_files()
        )));
    }
    simulate(scheme, library, &DemandVector::distinct(k), mode)
}
