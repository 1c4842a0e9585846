//! Reference fillable array with an eager O(n) fill.

use crate::arena::CostMeter;
use crate::contract::{check_index, FillableArray};

/// Ground truth for differential testing. Uses unrestricted memory; the
/// meter counts one access per element touched so its O(n) fill shows up in
/// cost reports.
#[derive(Debug, Clone)]
pub struct OracleArray {
    values: Vec<u64>,
    meter: CostMeter,
}

impl OracleArray {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "oracle needs n >= 1");
        OracleArray {
            values: vec![0; n],
            meter: CostMeter::default(),
        }
    }

    /// Unmetered view of the fully materialized array.
    pub fn values(&self) -> &[u64] {
        &self.values
    }
}

impl FillableArray for OracleArray {
    fn len(&self) -> usize {
        self.values.len()
    }

    fn read(&mut self, i: usize) -> u64 {
        check_index(i, self.values.len());
        self.meter.count_load();
        self.values[i - 1]
    }

    fn write(&mut self, i: usize, value: u64) {
        check_index(i, self.values.len());
        self.meter.count_store();
        self.values[i - 1] = value;
    }

    fn fill(&mut self, value: u64) {
        self.values.fill(value);
        self.meter.count_stores(self.values.len() as u64);
    }

    fn meter(&self) -> &CostMeter {
        &self.meter
    }

    fn end_op(&mut self) -> u64 {
        self.meter.op_boundary()
    }
}
