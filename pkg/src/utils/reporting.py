from pathlib import Path
from typing import List, Union
import logging

import pandas as pd

from src.models.records import BenchRecord

logger = logging.getLogger(__name__)

BENCH_COLUMNS = ['trial', 'row', 'n', 'method', 'nanos', 'eta', 'iterations']


def bench_frame(records: List[BenchRecord]) -> pd.DataFrame:
    """Create DataFrame from benchmark records"""
    if not records:
        return pd.DataFrame(columns=BENCH_COLUMNS)
    return pd.DataFrame([r.model_dump() for r in records], columns=BENCH_COLUMNS)


def summarize_bench(df: pd.DataFrame) -> pd.DataFrame:
    """Per-method timing summary"""
    if df.empty:
        return pd.DataFrame(columns=['method', 'solves', 'mean_nanos', 'median_nanos', 'total_nanos', 'mean_iterations'])
    summary = df.groupby('method').agg(
        solves=('nanos', 'size'),
        mean_nanos=('nanos', 'mean'),
        median_nanos=('nanos', 'median'),
        total_nanos=('nanos', 'sum'),
        mean_iterations=('iterations', 'mean'),
    ).reset_index()
    return summary.sort_values('mean_nanos').reset_index(drop=True)


def max_relative_disagreement(df: pd.DataFrame, reference: str, other: str) -> float:
    """Largest |eta_reference - eta_other| / max(|eta_reference|, 1e-300) over matching (trial, row) pairs"""
    if df.empty:
        return 0.0
    pivot = df.pivot_table(index=['trial', 'row'], columns='method', values='eta', aggfunc='first')
    if reference not in pivot or other not in pivot:
        return 0.0
    diff = (pivot[reference] - pivot[other]).abs() / pivot[reference].abs().clip(lower=1e-300)
    return float(diff.max())


def format_bench_report(summary: pd.DataFrame, disagreement: float, n: int, p: float) -> str:
    lines = [
        f"Benchmark: n={n}, p={p:g}",
        "-" * 60,
        summary.to_string(index=False, float_format=lambda v: f"{v:,.1f}"),
        "-" * 60,
        f"Max relative |eta_analytic - eta_bisect|: {disagreement:.3e}",
    ]
    return "\n".join(lines)


def save_bench_excel(df: pd.DataFrame, summary: pd.DataFrame, output_path: Union[str, Path]) -> Path:
    """Save per-trial timings and the summary to an Excel workbook"""
    output_path = Path(output_path)
    with pd.ExcelWriter(output_path, engine='openpyxl') as writer:
        df.to_excel(writer, sheet_name='Trials', index=False)
        summary.to_excel(writer, sheet_name='Summary', index=False)
    logger.info(f"Benchmark report saved to: {output_path}")
    return output_path
