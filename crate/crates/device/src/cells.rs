//! Mutable per-bank cell state: charge bits, sticky flip markers since the
//! last restore, fixed-point disturbance accumulators, and the per-row
//! restore epoch that anchors retention deadlines.

pub struct BankCells {
    rows: u32,
    width: u32,
    charge: Vec<u64>,
    flipped: Vec<u64>,
    pub acc_rh: Vec<u64>,
    pub acc_pg: Vec<u64>,
    pub last_restore: Vec<u64>,
}

impl BankCells {
    pub fn new(rows: u32, width: u32) -> Self {
        let cells = rows as usize * width as usize;
        let words = (cells + 63) / 64;
        BankCells {
            rows,
            width,
            charge: vec![0; words],
            flipped: vec![0; words],
            acc_rh: vec![0; cells],
            acc_pg: vec![0; cells],
            last_restore: vec![0; rows as usize],
        }
    }

    #[inline]
    pub fn idx(&self, row: u32, bit: u32) -> usize {
        debug_assert!(row < self.rows && bit < self.width);
        row as usize * self.width as usize + bit as usize
    }

    #[inline]
    pub fn charged(&self, row: u32, bit: u32) -> bool {
        let i = self.idx(row, bit);
        (self.charge[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set_charge(&mut self, row: u32, bit: u32, value: bool) {
        let i = self.idx(row, bit);
        if value {
            self.charge[i / 64] |= 1 << (i % 64);
        } else {
            self.charge[i / 64] &= !(1 << (i % 64));
        }
    }

    #[inline]
    pub fn flipped(&self, row: u32, bit: u32) -> bool {
        let i = self.idx(row, bit);
        (self.flipped[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set_flipped(&mut self, row: u32, bit: u32, value: bool) {
        let i = self.idx(row, bit);
        if value {
            self.flipped[i / 64] |= 1 << (i % 64);
        } else {
            self.flipped[i / 64] &= !(1 << (i % 64));
        }
    }

    /// Restore bookkeeping for one cell: accumulators and the sticky flip
    /// marker clear whenever the cell is sensed-and-restored or rewritten.
    #[inline]
    pub fn reset_cell(&mut self, row: u32, bit: u32) {
        let i = self.idx(row, bit);
        self.acc_rh[i] = 0;
        self.acc_pg[i] = 0;
        self.flipped[i / 64] &= !(1 << (i % 64));
    }
}
