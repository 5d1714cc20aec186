//! Network snapshots: JSON with the training config, all weights, and the
//! seed, sufficient for bit-exact reload.

use std::path::Path;

use anyhow::Result;
use delaynet_core::net::{NetConfig, Network};
use serde::{Deserialize, Serialize};

use crate::report::{read_json, write_json};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub config: NetConfig,
    pub network: Network,
}

pub fn save(path: &Path, snapshot: &Snapshot) -> Result<()> {
    write_json(path, snapshot)
}

pub fn load(path: &Path) -> Result<Snapshot> {
    read_json(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use delaynet_core::net::init_network;

    #[test]
    fn snapshot_roundtrip_is_bit_exact() {
        let config = NetConfig::for_inputs(12, 77);
        let network = init_network(&config).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("snapshot.json");
        save(&path, &Snapshot { config: config.clone(), network: network.clone() }).unwrap();
        let restored = load(&path).unwrap();
        assert_eq!(restored.config, config);
        assert_eq!(restored.network, network);
    }
}
