use crate::graph::{BipartiteGraph, NodeRef};

/// Epoch-stamped per-node scratch values; clearing is O(1).
#[derive(Debug, Default)]
pub(crate) struct Marks {
    stamp: [Vec<u32>; 2],
    value: [Vec<u32>; 2],
    epoch: u32,
}

impl Marks {
    pub(crate) fn new(graph: &BipartiteGraph) -> Self {
        Marks {
            stamp: [vec![0; graph.upper_count()], vec![0; graph.lower_count()]],
            value: [vec![0; graph.upper_count()], vec![0; graph.lower_count()]],
            epoch: 1,
        }
    }

    pub(crate) fn clear(&mut self) {
        self.epoch += 1;
    }

    #[inline]
    pub(crate) fn get(&self, node: NodeRef) -> Option<u32> {
        let s = node.side.slot();
        let i = node.index as usize;
        (self.stamp[s][i] == self.epoch).then(|| self.value[s][i])
    }

    #[inline]
    pub(crate) fn set(&mut self, node: NodeRef, value: u32) {
        let s = node.side.slot();
        let i = node.index as usize;
        self.stamp[s][i] = self.epoch;
        self.value[s][i] = value;
    }
}
