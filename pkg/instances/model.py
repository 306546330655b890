"""
Instance containers and generator parameter models
"""
from dataclasses import dataclass, field
from typing import Any, Dict, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from network.graph import FlexGraph, Requirement


@dataclass(frozen=True)
class Instance:
    """A graph with its requirement and where it came from"""
    graph: FlexGraph
    requirement: Requirement
    name: str = "instance"
    parameters: Dict[str, Any] = field(default_factory=dict, compare=False, hash=False)

    def summary(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "parameters": dict(self.parameters),
            "vertices": self.graph.vertex_count,
            "edges": self.graph.edge_count,
            "safe_edges": len(self.graph.safe_ids),
            "requirement": str(self.requirement),
        }


class InstanceSpec(BaseModel):
    """Named instance request, e.g. GAP with k=4"""
    name: str
    parameters: Dict[str, Any] = Field(default_factory=dict)


class RandomInstanceParams(BaseModel):
    """Parameters of a random connected multigraph instance"""
    n: int = Field(8, ge=2, le=20)
    extra_edges: int = Field(10, ge=0)
    safe_probability: float = Field(0.5, ge=0.0, le=1.0)
    cost_low: int = Field(1, ge=0)
    cost_high: int = Field(10, ge=0)
    cost_denominator: int = Field(1, ge=1)
    p: int = Field(2, ge=0)
    q: int = Field(2, ge=0)
    scope: Literal["pair", "terminals", "spanning"] = "spanning"
    terminal_count: Optional[int] = Field(None, ge=2)

    @model_validator(mode="after")
    def check_ranges(self) -> "RandomInstanceParams":
        if self.cost_high < self.cost_low:
            raise ValueError("cost_high must be >= cost_low")
        if self.terminal_count is not None and self.terminal_count > self.n:
            raise ValueError("terminal_count exceeds n")
        return self
