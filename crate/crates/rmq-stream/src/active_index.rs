//! Open-addressing index over active positions.
//!
//! Linear probing with tombstones: removed keys stay in their slot as
//! dead markers so later probes still find keys inserted past them. The
//! backing array holds at least twice `capacity` slots, so the load
//! factor, counting tombstones, never exceeds 50%. Once live plus dead
//! entries reach `capacity` the owner must rebuild (see the engines'
//! transfer step); the table itself never grows in place.

use crate::command::Position;

#[derive(Debug, Clone)]
enum Slot<V> {
    Empty,
    Dead(Position),
    Live(Position, V),
}

#[derive(Debug, Clone)]
pub struct ActiveIndex<V> {
    slots: Vec<Slot<V>>,
    mask: usize,
    live: usize,
    dead: usize,
    capacity: usize,
}

impl<V> ActiveIndex<V> {
    /// A table accepting up to `capacity` live-or-dead entries.
    pub fn with_capacity(capacity: usize) -> Self {
        let capacity = capacity.max(1);
        let slots = (2 * capacity).next_power_of_two();
        ActiveIndex {
            slots: (0..slots).map(|_| Slot::Empty).collect(),
            mask: slots - 1,
            live: 0,
            dead: 0,
            capacity,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn live(&self) -> usize {
        self.live
    }

    pub fn dead(&self) -> usize {
        self.dead
    }

    /// True once live plus tombstoned entries fill the capacity.
    pub fn is_full(&self) -> bool {
        self.live + self.dead >= self.capacity
    }

    fn probe(&self, key: Position) -> usize {
        mix(key) as usize & self.mask
    }

    /// Inserts `key`; revives the tombstone if the key was removed
    /// earlier. Panics if the table is full and the key is absent; the
    /// owner checks `is_full` first.
    pub fn insert(&mut self, key: Position, value: V) {
        let mut idx = self.probe(key);
        let mut first_dead: Option<usize> = None;
        loop {
            match &self.slots[idx] {
                Slot::Empty => {
                    let target = match first_dead {
                        Some(d) => {
                            self.dead -= 1;
                            d
                        }
                        None => {
                            assert!(
                                self.live + self.dead < self.capacity,
                                "active index is full"
                            );
                            idx
                        }
                    };
                    self.slots[target] = Slot::Live(key, value);
                    self.live += 1;
                    return;
                }
                Slot::Dead(k) => {
                    if *k == key {
                        self.slots[idx] = Slot::Live(key, value);
                        self.dead -= 1;
                        self.live += 1;
                        return;
                    }
                    if first_dead.is_none() {
                        first_dead = Some(idx);
                    }
                }
                Slot::Live(k, _) => {
                    if *k == key {
                        self.slots[idx] = Slot::Live(key, value);
                        return;
                    }
                }
            }
            idx = (idx + 1) & self.mask;
        }
    }

    pub fn get(&self, key: Position) -> Option<&V> {
        let mut idx = self.probe(key);
        loop {
            match &self.slots[idx] {
                Slot::Empty => return None,
                Slot::Dead(k) if *k == key => return None,
                Slot::Live(k, v) if *k == key => return Some(v),
                _ => idx = (idx + 1) & self.mask,
            }
        }
    }

    pub fn contains(&self, key: Position) -> bool {
        self.get(key).is_some()
    }

    /// Tombstones `key`, returning its value if it was live.
    pub fn remove(&mut self, key: Position) -> Option<V> {
        let mut idx = self.probe(key);
        loop {
            match &self.slots[idx] {
                Slot::Empty => return None,
                Slot::Dead(k) if *k == key => return None,
                Slot::Live(k, _) if *k == key => {
                    let old = std::mem::replace(&mut self.slots[idx], Slot::Dead(key));
                    self.live -= 1;
                    self.dead += 1;
                    match old {
                        Slot::Live(_, v) => return Some(v),
                        _ => unreachable!(),
                    }
                }
                _ => idx = (idx + 1) & self.mask,
            }
        }
    }

    /// Iterates over live entries in table order.
    pub fn iter_live(&self) -> impl Iterator<Item = (Position, &V)> {
        self.slots.iter().filter_map(|s| match s {
            Slot::Live(k, v) => Some((*k, v)),
            _ => None,
        })
    }
}

/// 64-bit finalizer used to spread sequential position keys.
/// Constants are the splitmix64 output mix.
fn mix(mut x: u64) -> u64 {
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}
