"""
Run Tracing Utility
Logs solver runs and failures as JSONL for later ratio analysis
"""
import logging
import json
from typing import Dict, Any, Optional
from datetime import datetime
from pathlib import Path

from config.settings import settings

logger = logging.getLogger(__name__)


class RunTracer:
    """
    Utility for tracing solver runs
    One JSONL session file per process; the directory is created on first write
    """

    def __init__(self, log_dir: Optional[str] = None, enabled: Optional[bool] = None):
        self.log_dir = Path(log_dir or settings.trace_dir)
        self.enabled = settings.trace_runs if enabled is None else enabled
        self.session_file = self.log_dir / f"session_{datetime.now().strftime('%Y%m%d_%H%M%S')}.jsonl"
        logger.debug(f"Run tracer initialized: {self.session_file} (enabled={self.enabled})")

    def _append(self, entry: Dict[str, Any]) -> None:
        if not self.enabled:
            return
        try:
            self.log_dir.mkdir(parents=True, exist_ok=True)
            with open(self.session_file, 'a') as f:
                f.write(json.dumps(entry, default=str) + '\n')
        except OSError as e:
            logger.error(f"Failed to write trace entry: {e}")

    def log_run(
        self,
        solver: str,
        instance: str,
        result: Dict[str, Any],
        metadata: Optional[Dict[str, Any]] = None
    ):
        """
        Log a finished solver run

        Args:
            solver: Solver or pipeline name
            instance: Instance name
            result: Cost, ratios and other outcome fields
            metadata: Additional metadata (e.g., seed, timing)
        """
        self._append({
            "timestamp": datetime.now().isoformat(),
            "solver": solver,
            "instance": instance,
            "result": result,
            "metadata": metadata or {}
        })
        logger.debug(f"Traced run of {solver} on {instance}")

    def log_error(
        self,
        solver: str,
        instance: str,
        error: str,
        metadata: Optional[Dict[str, Any]] = None
    ):
        """
        Log a failed solver run

        Args:
            solver: Solver or pipeline name
            instance: Instance name
            error: Error message
            metadata: Additional metadata
        """
        self._append({
            "timestamp": datetime.now().isoformat(),
            "solver": solver,
            "instance": instance,
            "error": error,
            "status": "failed",
            "metadata": metadata or {}
        })
        logger.debug(f"Traced failure of {solver} on {instance}")

    def generate_report(self) -> Dict[str, Any]:
        """
        Generate a summary report of all runs in this session

        Returns:
            Dictionary with statistics
        """
        if not self.session_file.exists():
            return {"error": "No log file found"}

        total_runs = 0
        failed_runs = 0
        solver_stats = {}

        try:
            with open(self.session_file, 'r') as f:
                for line in f:
                    entry = json.loads(line)
                    total_runs += 1

                    solver = entry.get("solver", "unknown")
                    stats = solver_stats.setdefault(solver, {"total": 0, "failed": 0, "worst_ratio": None})
                    stats["total"] += 1

                    if entry.get("status") == "failed":
                        failed_runs += 1
                        stats["failed"] += 1
                        continue

                    ratio = entry.get("result", {}).get("ratio_opt")
                    if ratio is not None and (stats["worst_ratio"] is None or ratio > stats["worst_ratio"]):
                        stats["worst_ratio"] = ratio

            return {
                "session_file": str(self.session_file),
                "total_runs": total_runs,
                "successful_runs": total_runs - failed_runs,
                "failed_runs": failed_runs,
                "success_rate": (total_runs - failed_runs) / total_runs if total_runs > 0 else 0,
                "solver_stats": solver_stats
            }

        except (OSError, json.JSONDecodeError) as e:
            logger.error(f"Failed to generate report: {e}")
            return {"error": str(e)}


# Global run tracer instance
run_tracer = RunTracer()
