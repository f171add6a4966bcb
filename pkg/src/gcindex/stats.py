from dataclasses import dataclass, fields


@dataclass
class QueryStats:
    """Instrumentation counters filled in by queries when passed ``stats=``.

    ``light_transitions``  heavy-path exits into a light child
    ``probes``             jump-table lookups during heavy-path search
    ``jumps``              left/right jump pointers followed or fringe
                           pieces written while emitting a hanging side
    ``decompress_nodes``   nodes of the virtual decompression tree
    ``nodes_visited``      expanded nodes entered by the balanced engine
    """

    light_transitions: int = 0
    probes: int = 0
    jumps: int = 0
    decompress_nodes: int = 0
    nodes_visited: int = 0

    @property
    def work(self) -> int:
        return self.probes + self.jumps + self.decompress_nodes + self.nodes_visited

    def reset(self) -> None:
        self.light_transitions = self.probes = self.jumps = 0
        self.decompress_nodes = self.nodes_visited = 0

    def as_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["work"] = self.work
        return d
