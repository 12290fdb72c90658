import threading
from datetime import datetime
from typing import Any, Dict, Optional

from torb.config import Config
from torb.services.debug_logger import DebugLogger
from torb.services.gl2z_core import Mat2, format_matrix

FINISHED = ("completed", "inconclusive", "failed")


class JobManager:
    """Runs genus searches on background threads and tracks them on the app"""

    def __init__(self, app):
        # worker threads run outside the request context, so hold the real app and not the proxy
        self.app = app._get_current_object() if hasattr(app, '_get_current_object') else app

    def start_genus_search(self, m: Mat2, g_max: int, job_id: str,
                           budget: Optional[int] = None, pair_length: Optional[int] = None) -> None:
        """Start a genus search in a background thread"""

        self._evict_finished()
        self._update_status(job_id, "queued", "Genus search queued")
        DebugLogger.log_job(job_id, "queued", {"matrix": format_matrix(m), "g_max": g_max})

        def run_search():
            try:
                from torb.services.records import genus_record

                self._update_status(job_id, "running", f"Searching up to genus {g_max}")
                record = genus_record(m, g_max, budget, pair_length)
                self.app.genus_results[job_id] = record.to_json()

                conclusive = record.data["conclusive"]
                status = "completed" if conclusive else "inconclusive"
                self._update_status(job_id, status, record.lines[0])
                DebugLogger.log_job(job_id, status, {
                    "genus": record.data["genus"],
                    "nodes": record.data["nodes"]
                })

            except Exception as e:
                DebugLogger.log_error(f"Genus search failed for job {job_id}", e)
                self._update_status(job_id, "failed", f"Search failed: {str(e)}")
            finally:
                self.app.genus_threads.pop(job_id, None)

        thread = threading.Thread(target=run_search, name=f"genus-{job_id}")
        thread.daemon = True
        self.app.genus_threads[job_id] = thread
        thread.start()

    def _evict_finished(self) -> None:
        """Drop the oldest finished jobs so at most the configured number remain"""
        cap = self.app.config.get('MAX_FINISHED_JOBS', Config.MAX_FINISHED_JOBS)
        finished = [job_id for job_id, job in list(self.app.genus_jobs.items()) if job['status'] in FINISHED]
        for job_id in finished[:max(0, len(finished) - cap + 1)]:
            self.app.genus_jobs.pop(job_id, None)
            self.app.genus_results.pop(job_id, None)
            DebugLogger.log_job(job_id, "evicted")

    def _update_status(self, job_id: str, status: str, message: str) -> None:
        self.app.genus_jobs[job_id] = {
            'job_id': job_id,
            'status': status,
            'message': message,
            'timestamp': datetime.now().isoformat()
        }

    def get_status(self, job_id: str) -> Optional[Dict[str, Any]]:
        """Get the current job status, None for an unknown job"""
        return self.app.genus_jobs.get(job_id)

    def get_results(self, job_id: str) -> Optional[Dict[str, Any]]:
        """Get the genus record of a finished job"""
        return self.app.genus_results.get(job_id)

    def wait(self, job_id: str, timeout: Optional[float] = None) -> bool:
        """Block until the job ends; False on timeout or unknown job"""
        thread = self.app.genus_threads.get(job_id)
        if thread is not None:
            thread.join(timeout)
            if thread.is_alive():
                return False
        job = self.app.genus_jobs.get(job_id)
        return job is not None and job['status'] in FINISHED
