"""
Line-delimited export of episode traces
"""
import json
from typing import Dict, List, Sequence, TextIO

from .state import StepOutcome


def trace_records(trace: Sequence[StepOutcome]) -> List[Dict]:
    """One plain record per step: timestep, positions, actions, rewards, events"""
    records = []
    for outcome in trace:
        state = outcome.next_state
        records.append({
            'timestep': state.timestep,
            'agents': [list(p) for p in state.agents],
            'landmarks': [list(p) for p in state.landmarks],
            'actions': list(outcome.actions),
            'rewards': list(outcome.rewards),
            'events': [str(e) for e in sorted(outcome.events)],
        })
    return records


def export_trace(trace: Sequence[StepOutcome], stream: TextIO) -> int:
    """
    Write a trace as JSON lines

    Args:
        trace: Episode trace
        stream: Writable text stream

    Returns:
        Number of lines written
    """
    records = trace_records(trace)
    for record in records:
        stream.write(json.dumps(record, separators=(",", ":")) + "\n")
    return len(records)
