"""Obstacle grid-world with shaped rewards for goal navigation.

Coordinates are (x, y) with x the column and y the row. Action 0 moves up
(y+1), 1 down (y-1), 2 left (x-1), 3 right (x+1). Moves off the grid leave
the agent in place. Reaching the goal pays +10 and ends the episode; walking
into an obstacle pays -3 and bounces the agent back to its cell; every other
step pays a small shaped reward that favours approaching the goal. The
episode step cap is enforced by the training loop, not here.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

UP, DOWN, LEFT, RIGHT = 0, 1, 2, 3
MOVES = ((0, 1), (0, -1), (-1, 0), (1, 0))

GOAL_REWARD = 10.0
OBSTACLE_PENALTY = -3.0
STEP_COST = -0.001
PROGRESS_SCALE = 0.1
DISTANCE_SCALE = 0.01

Cell = tuple[int, int]


def manhattan_dist(a: Cell, b: Cell) -> int:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


@dataclass(frozen=True)
class StepOutcome:
    next_state: Cell
    reward: float
    done: bool
    hit_obstacle: bool
    reached_goal: bool


@dataclass(frozen=True)
class GridWorld:
    size: int = 10
    start: Cell = (0, 0)
    goal: Cell | None = None
    obstacles: frozenset[Cell] = frozenset()
    max_steps: int = 400
    obstacle_rate: float = 0.05

    def __post_init__(self):
        if self.size < 2:
            raise ValueError(f"grid size must be >= 2, got {self.size}")
        if self.goal is None:
            object.__setattr__(self, "goal", (self.size - 1, self.size - 1))
        object.__setattr__(self, "obstacles", frozenset(self.obstacles))
        for name, cell in (("start", self.start), ("goal", self.goal)):
            if not self.in_bounds(cell):
                raise ValueError(f"{name} {cell} outside {self.size}x{self.size} grid")
        if self.start == self.goal:
            raise ValueError("start and goal must differ")
        for cell in self.obstacles:
            if not self.in_bounds(cell):
                raise ValueError(f"obstacle {cell} outside grid")
            if cell in (self.start, self.goal):
                raise ValueError(f"obstacle {cell} overlaps start or goal")

    def in_bounds(self, cell: Cell) -> bool:
        x, y = cell
        return 0 <= x < self.size and 0 <= y < self.size

    def num_obstacles(self) -> int:
        return round(self.obstacle_rate * self.size * self.size)

    def reset(self) -> Cell:
        return self.start

    def place_obstacles(self, rng: np.random.Generator) -> GridWorld:
        """Sample a fresh obstacle layout, uniform over cells excluding start and goal."""
        candidates = [
            (x, y)
            for y in range(self.size)
            for x in range(self.size)
            if (x, y) != self.start and (x, y) != self.goal
        ]
        count = self.num_obstacles()
        if count > len(candidates):
            raise ValueError(
                f"obstacle_rate {self.obstacle_rate} asks for {count} cells, "
                f"only {len(candidates)} available"
            )
        chosen = rng.choice(len(candidates), size=count, replace=False)
        return dataclasses.replace(
            self, obstacles=frozenset(candidates[i] for i in chosen)
        )

    def step(self, state: Cell, action: int) -> StepOutcome:
        """Advance one move from `state`; exactly one reward case applies."""
        if action not in (UP, DOWN, LEFT, RIGHT):
            raise ValueError(f"invalid action {action}")
        dx, dy = MOVES[action]
        candidate = (state[0] + dx, state[1] + dy)
        if not self.in_bounds(candidate):
            candidate = state
        if candidate == self.goal:
            return StepOutcome(candidate, GOAL_REWARD, True, False, True)
        if candidate in self.obstacles:
            return StepOutcome(state, OBSTACLE_PENALTY, False, True, False)
        progress = manhattan_dist(state, self.goal) - manhattan_dist(candidate, self.goal)
        reward = (
            STEP_COST
            + PROGRESS_SCALE * progress
            - DISTANCE_SCALE * manhattan_dist(candidate, self.goal)
        )
        return StepOutcome(candidate, reward, False, False, False)
