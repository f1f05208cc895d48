use anyhow::Result;
use crate::args::WitnessCommand;
pub fn run(_command: WitnessCommand) -> Result<i32> {
    anyhow::bail!("not wired yet")
}
