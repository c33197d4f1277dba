"""
Reportes de validación cruzada: tablas de texto, CSV y libro de Excel
"""
import logging
import os

import openpyxl
import pandas as pd
from openpyxl.styles import Alignment, Border, Font, PatternFill, Side

from vgrf_data import SYMMETRIC_PAIRS
from .metrics import detection_metrics, multiclass_metrics

logger = logging.getLogger(__name__)

LEVEL_NAMES = {'segment': 'Segmento', 'subject': 'Sujeto'}


def fmt_pct(value, digits=1):
    """Porcentaje con `digits` decimales; métricas indefinidas como n/a"""
    if value is None or pd.isna(value):
        return 'n/a'
    return f"{100 * value:.{digits}f}"


def _pct_sd(summary, key):
    mean, sd = summary.get(key, (None, None))
    if mean is None:
        return 'n/a'
    return f"{fmt_pct(mean)} ± {fmt_pct(sd)}"


# ============================================================================
# TABLAS
# ============================================================================

def detection_frame(result):
    """Una fila por nivel: Sp, Se, Acc combinados y media ± SD por fold"""
    rows = []
    for report in (result.segment, result.subject):
        metrics = detection_metrics(report.confusion)
        summary = report.fold_summary()
        rows.append({
            'level': report.level,
            'Sp (%)': fmt_pct(metrics.specificity),
            'Se (%)': fmt_pct(metrics.sensitivity),
            'Acc (%)': fmt_pct(metrics.accuracy),
            'Sp fold (%)': _pct_sd(summary, 'specificity'),
            'Se fold (%)': _pct_sd(summary, 'sensitivity'),
            'Acc fold (%)': _pct_sd(summary, 'accuracy'),
            'n': report.confusion.total,
        })
    return pd.DataFrame(rows)


def severity_frame(report):
    """Precision, Recall, F1 y n por clase más el promedio ponderado"""
    metrics = multiclass_metrics(report.confusion)
    rows = [{
        'class': str(c.label),
        'Precision (%)': fmt_pct(c.precision),
        'Recall (%)': fmt_pct(c.recall),
        'F1 (%)': fmt_pct(c.f1),
        'n': c.support,
    } for c in metrics.per_class]
    rows.append({
        'class': 'Weighted average',
        'Precision (%)': fmt_pct(metrics.weighted_precision),
        'Recall (%)': fmt_pct(metrics.weighted_recall),
        'F1 (%)': fmt_pct(metrics.weighted_f1),
        'n': metrics.total,
    })
    return pd.DataFrame(rows)


def confusion_frame(cm, normalized=False):
    """Filas = clase real, columnas = predicha; normalizada en % por fila"""
    values = cm.normalized().round(1) if normalized else cm.counts
    names = [str(label) for label in cm.labels]
    frame = pd.DataFrame(values, index=names, columns=names)
    frame.index.name = 'true \\ predicted'
    return frame


def ablation_frame(ablation):
    frame = pd.DataFrame({
        'Sensors': [f"w/o {SYMMETRIC_PAIRS[name][0].value} & {SYMMETRIC_PAIRS[name][1].value}"
                    for name in ablation['removed']],
        'Sp (%)': [fmt_pct(v) for v in ablation['specificity']],
        'Se (%)': [fmt_pct(v) for v in ablation['sensitivity']],
        'Acc (%)': [fmt_pct(v) for v in ablation['accuracy']],
    })
    return frame


def render_cv(result):
    """Resumen legible de una validación cruzada"""
    sections = [f"Tarea: {result.task} ({len(result.model_config.channels)} canales, "
                f"{len(result.logs)} folds)"]
    if result.task == 'detection':
        sections.append(detection_frame(result).to_string(index=False))
        for report in (result.segment, result.subject):
            sections.append(f"Matriz de confusión ({LEVEL_NAMES[report.level]})\n"
                            f"{confusion_frame(report.confusion).to_string()}")
    else:
        for report in (result.segment, result.subject):
            name = LEVEL_NAMES[report.level]
            sections.append(f"{name}\n{severity_frame(report).to_string(index=False)}")
            sections.append(f"Matriz de confusión normalizada ({name}, %)\n"
                            f"{confusion_frame(report.confusion, normalized=True).to_string()}")
    return '\n\n'.join(sections)


def render_ablation(ablation):
    return "Resultados a nivel segmento\n" + ablation_frame(ablation).to_string(index=False)


# ============================================================================
# EXPORTACIÓN
# ============================================================================

def cv_frames(result):
    """Tablas exportables de una validación cruzada, por nombre de hoja"""
    frames = {}
    if result.task == 'detection':
        frames['summary'] = detection_frame(result)
    for report in (result.segment, result.subject):
        if result.task == 'severity':
            frames[f'{report.level}_classes'] = severity_frame(report)
        frames[f'{report.level}_folds'] = report.fold_table()
        frames[f'{report.level}_confusion'] = confusion_frame(report.confusion).reset_index()
        frames[f'{report.level}_confusion_pct'] = confusion_frame(report.confusion, normalized=True).reset_index()
    frames['walks'] = result.walks
    return frames


def export_workbook(frames, path):
    """Una hoja por tabla, encabezados con estilo"""
    wb = openpyxl.Workbook()
    wb.remove(wb.active)

    header_fill = PatternFill(start_color="1F4E79", end_color="1F4E79", fill_type="solid")
    header_font = Font(bold=True, color="FFFFFF", size=11)
    border = Border(
        left=Side(style='thin'),
        right=Side(style='thin'),
        top=Side(style='thin'),
        bottom=Side(style='thin')
    )

    for name, frame in frames.items():
        ws = wb.create_sheet(title=name[:31])
        for col, header in enumerate(frame.columns, 1):
            cell = ws.cell(row=1, column=col)
            cell.value = str(header)
            cell.fill = header_fill
            cell.font = header_font
            cell.alignment = Alignment(horizontal='center', vertical='center')
            cell.border = border
            ws.column_dimensions[cell.column_letter].width = max(12, len(str(header)) + 2)

        for row, values in enumerate(frame.itertuples(index=False), 2):
            for col, value in enumerate(values, 1):
                cell = ws.cell(row=row, column=col)
                cell.value = None if pd.isna(value) else (value.item() if hasattr(value, 'item') else value)
                cell.border = border

    wb.save(path)
    return path


def write_reports(frames, text, reports_dir, xlsx=True):
    """
    Escribe cada tabla como CSV, el resumen de texto y opcionalmente el .xlsx

    Returns:
        dict: nombre → ruta escrita
    """
    try:
        os.makedirs(reports_dir, exist_ok=True)
        paths = {}
        for name, frame in frames.items():
            paths[name] = os.path.join(reports_dir, f'{name}.csv')
            frame.to_csv(paths[name], index=False)

        paths['text'] = os.path.join(reports_dir, 'summary.txt')
        with open(paths['text'], 'w', encoding='utf-8') as handle:
            handle.write(text + '\n')

        if xlsx:
            paths['xlsx'] = export_workbook(frames, os.path.join(reports_dir, 'reports.xlsx'))

        logger.info(f"Reportes escritos en {reports_dir}")
        return paths

    except OSError as e:
        logger.error(f"Error escribiendo reportes en {reports_dir}: {str(e)}")
        raise
