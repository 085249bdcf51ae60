import logging

from ortools.sat.python import cp_model

logger = logging.getLogger(__name__)


class AssignmentCollector(cp_model.CpSolverSolutionCallback):
    """Keep each letter -> digit assignment CP-SAT reports."""

    def __init__(self, letter_vars):
        super().__init__()

        self._letters = sorted(letter_vars)
        self._digit_vars = [letter_vars[ch] for ch in self._letters]
        self.assignments = []

    def on_solution_callback(self):
        digits = [self.Value(var) for var in self._digit_vars]
        self.assignments.append(dict(zip(self._letters, digits)))

        logger.debug(
            "Assignment %d: %s", len(self.assignments),
            ' '.join(f"{ch}={v}" for ch, v in zip(self._letters, digits)))
