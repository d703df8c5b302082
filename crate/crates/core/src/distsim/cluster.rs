//! Synchronous message-passing cluster.
//!
//! A round runs every machine's step in parallel. A step sees only its own
//! storage and the messages delivered to it at the previous barrier, and
//! emits messages through an [`Outbox`]. At the barrier, messages are
//! delivered in sender order, so results never depend on scheduling.

use rayon::prelude::*;

use super::report::LoadRow;

/// Anything with a size in load units.
pub trait Units {
    fn units(&self) -> u64;
}

/// Messages emitted by one machine during one round.
#[derive(Debug)]
pub struct Outbox<M> {
    sent: Vec<(usize, M)>,
    machine_count: usize,
}

impl<M: Units> Outbox<M> {
    /// Queues `message` for `to`.
    pub fn send(&mut self, to: usize, message: M) {
        assert!(to < self.machine_count, "no machine {to}");
        self.sent.push((to, message));
    }
}

/// A virtual machine.
#[derive(Debug)]
pub struct Machine<S, M> {
    pub id: usize,
    pub storage: S,
    inbox: Vec<M>,
    load_counter: u64,
}

impl<S, M> Machine<S, M> {
    /// Units received over all rounds so far.
    pub fn load_counter(&self) -> u64 {
        self.load_counter
    }
}

/// Machines plus the per-round load rows recorded so far.
#[derive(Debug)]
pub struct Cluster<S, M> {
    machines: Vec<Machine<S, M>>,
    rows: Vec<LoadRow>,
    rounds: usize,
    messages: u64,
}

impl<S, M> Cluster<S, M>
where
    S: Units + Send,
    M: Units + Send,
{
    pub fn new(storages: Vec<S>) -> Self {
        let machines = storages
            .into_iter()
            .enumerate()
            .map(|(id, storage)| Machine {
                id,
                storage,
                inbox: Vec::new(),
                load_counter: 0,
            })
            .collect();
        Self {
            machines,
            rows: Vec::new(),
            rounds: 0,
            messages: 0,
        }
    }

    pub fn machine_count(&self) -> usize {
        self.machines.len()
    }

    pub fn machines(&self) -> &[Machine<S, M>] {
        &self.machines
    }

    pub fn rounds_executed(&self) -> usize {
        self.rounds
    }

    pub fn total_messages(&self) -> u64 {
        self.messages
    }

    /// Runs one synchronous round. `step(id, storage, inbox, outbox)` is
    /// called once per machine; the inbox holds what was sent to it in the
    /// previous round.
    pub fn round<F>(&mut self, step: F)
    where
        F: Fn(usize, &mut S, Vec<M>, &mut Outbox<M>) + Sync,
    {
        self.rounds += 1;
        let round = self.rounds;
        let machine_count = self.machines.len();
        let results: Vec<(Vec<(usize, M)>, LoadRow)> = self
            .machines
            .par_iter_mut()
            .map(|machine| {
                let inbox = std::mem::take(&mut machine.inbox);
                let units_in: u64 = inbox.iter().map(Units::units).sum();
                let before = machine.storage.units();
                let mut outbox = Outbox {
                    sent: Vec::new(),
                    machine_count,
                };
                step(machine.id, &mut machine.storage, inbox, &mut outbox);
                let after = machine.storage.units();
                machine.load_counter += units_in;
                let row = LoadRow {
                    machine: machine.id,
                    round,
                    units_in,
                    units_out: outbox.sent.iter().map(|(_, m)| m.units()).sum(),
                    storage_peak: before.max(after),
                };
                (outbox.sent, row)
            })
            .collect();
        // barrier: deliver in sender order
        for (sent, row) in results {
            self.messages += sent.len() as u64;
            for (to, message) in sent {
                self.machines[to].inbox.push(message);
            }
            self.rows.push(row);
        }
    }

    /// Load rows ordered by machine, then round.
    pub fn rows(&self) -> Vec<LoadRow> {
        let mut rows = self.rows.clone();
        rows.sort_by_key(|r| (r.machine, r.round));
        rows
    }

    /// Messages still waiting for a next round.
    pub fn pending_messages(&self) -> usize {
        self.machines.iter().map(|m| m.inbox.len()).sum()
    }
}
