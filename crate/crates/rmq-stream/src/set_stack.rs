//! The monotonic stack with per-slot position sets, shared by the
//! vanilla and compact engines.
//!
//! Stack values strictly increase bottom-to-top. Slot 0 is the bottom
//! sentinel (`i64::MIN`); the initial top sentinel (`i64::MAX`) is
//! overwritten by the first value. Each slot optionally holds one
//! union-find element of the position set whose range-minimum answer is
//! that slot's value; popped slots merge their set into the slot below.

use crate::union_find::PositionForest;

#[derive(Debug, Clone)]
pub(crate) struct SetSlot {
    pub value: i64,
    /// Some element of the slot's position set, if any position maps here.
    pub rep: Option<usize>,
}

#[derive(Debug, Clone)]
pub(crate) struct SetStack {
    pub slots: Vec<SetSlot>,
    pub forest: PositionForest,
}

impl SetStack {
    pub fn new() -> Self {
        SetStack {
            slots: vec![
                SetSlot { value: i64::MIN, rep: None },
                SetSlot { value: i64::MAX, rep: None },
            ],
            forest: PositionForest::new(),
        }
    }

    pub fn depth(&self) -> usize {
        self.slots.len()
    }

    pub fn top_value(&self) -> i64 {
        self.slots.last().unwrap().value
    }

    pub fn values(&self) -> Vec<i64> {
        self.slots.iter().map(|s| s.value).collect()
    }

    pub fn value_at(&self, level: usize) -> i64 {
        self.slots[level].value
    }

    /// Processes a value: pops every slot whose predecessor is >= `v`,
    /// merging each popped set downward, then overwrites the top with
    /// `v` if the top is still larger.
    pub fn process_value(&mut self, v: i64) {
        let mut k = self.slots.len() - 1;
        if self.slots[k].value > v {
            while self.slots[k - 1].value >= v {
                self.merge_top_down(k);
                self.slots.pop();
                k -= 1;
            }
            self.slots[k].value = v;
        }
    }

    /// Merges slot `k`'s set into slot `k - 1`, leaving the surviving
    /// root at level `k - 1`.
    fn merge_top_down(&mut self, k: usize) {
        let top_rep = self.slots[k].rep.take();
        let below_rep = self.slots[k - 1].rep;
        match (below_rep, top_rep) {
            (_, None) => {}
            (None, Some(b)) => {
                self.forest.union(b, b, k - 1).expect("rep is present");
                self.slots[k - 1].rep = Some(b);
            }
            (Some(a), Some(b)) => {
                self.forest.union(a, b, k - 1).expect("reps are present");
            }
        }
    }

    /// Processes a mark given the last value: pushes a new slot when the
    /// top is below it, otherwise joins the top slot's set. Returns the
    /// fresh union-find element representing the marked position.
    pub fn process_mark(&mut self, v_last: i64) -> usize {
        let elem = self.forest.len();
        let k = self.slots.len() - 1;
        if self.slots[k].value < v_last {
            self.forest.make_set(elem, k + 1).expect("fresh element");
            self.slots.push(SetSlot { value: v_last, rep: Some(elem) });
        } else {
            self.forest.make_set(elem, k).expect("fresh element");
            match self.slots[k].rep {
                Some(r) => {
                    self.forest.union(r, elem, k).expect("reps are present");
                }
                None => self.slots[k].rep = Some(elem),
            }
        }
        elem
    }

    /// Stack values must strictly increase bottom-to-top.
    #[cfg(test)]
    pub fn is_sorted(&self) -> bool {
        self.slots.windows(2).all(|w| w[0].value < w[1].value)
    }
}
