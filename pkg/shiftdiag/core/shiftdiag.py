####################################################################################################
#                                           shiftdiag.py                                           #
####################################################################################################
#                                                                                                  #
# Purpose: Defines the ShiftDiag class that chains the pipeline stages:                            #
#          load (parse + validate) -> analyze (direction, shifts, selections, plan, advisory)      #
#          -> verify (optional, against a .cpt model) -> AnalysisReport.                           #
#                                                                                                  #
####################################################################################################


#*************#
#   imports   #
#*************#
from __future__ import annotations

import logging
from dataclasses import replace
from pathlib import Path

# own
from shiftdiag.bn.cpt_format import load_model
from shiftdiag.bn.model import BNModel
from shiftdiag.bn.verification import verify_findings
from shiftdiag.core.diagram import CausalDiagram, ValidationMode
from shiftdiag.core.parameter_registry import DEFAULT_SETTINGS, AnalysisSettings
from shiftdiag.core.report import AnalysisReport, build_checklist
from shiftdiag.dsl.parser import load_diagram
from shiftdiag.taxonomy.corrections import plan_corrections
from shiftdiag.taxonomy.direction import advise_learning_strategies, classify_direction
from shiftdiag.taxonomy.selection import analyze_selection
from shiftdiag.taxonomy.shifts import detect_dataset_shifts

logger = logging.getLogger(__name__)


#**************************************************************************************************#
#                                            ShiftDiag                                             #
#**************************************************************************************************#
#                                                                                                  #
# Holds the diagram being analyzed and the settings in force; each stage returns its result and   #
# keeps the latest report on the instance.                                                         #
#                                                                                                  #
#**************************************************************************************************#
class ShiftDiag:

    def __init__(self, settings: AnalysisSettings = DEFAULT_SETTINGS,
                 mode: ValidationMode | str = ValidationMode.STRICT):
        self.settings = settings
        self.mode = ValidationMode(mode)
        self.diagram: CausalDiagram | None = None
        self.report: AnalysisReport | None = None

    def load(self, path: str | Path) -> CausalDiagram:
        self.diagram = load_diagram(path, self.mode)
        self.report = None
        logger.info("loaded %s", path)
        return self.diagram

    def use(self, diagram: CausalDiagram) -> "ShiftDiag":
        self.diagram = diagram
        self.report = None
        return self

    def _require_diagram(self) -> CausalDiagram:
        if self.diagram is None:
            raise RuntimeError("No diagram loaded. Call load() or use() first.")
        return self.diagram

    def analyze(self) -> AnalysisReport:
        diagram = self._require_diagram()
        direction = classify_direction(diagram)
        shifts = tuple(detect_dataset_shifts(diagram, direction))
        selections = tuple(analyze_selection(diagram))
        self.report = AnalysisReport(
            diagram=diagram,
            direction=direction,
            shifts=shifts,
            selections=selections,
            plan=plan_corrections(direction, shifts, selections),
            advisory=advise_learning_strategies(direction),
            checklist=build_checklist(diagram, direction, shifts, selections),
            settings=self.settings,
        )
        return self.report

    def load_model(self, cpt_path: str | Path) -> BNModel:
        return load_model(self._require_diagram(), cpt_path, self.settings)

    def verify(self, model: BNModel | str | Path, loss=None) -> AnalysisReport:
        """Analyze (if needed) and attach the verification of every finding against ``model``."""
        report = self.report or self.analyze()
        if not isinstance(model, BNModel):
            model = self.load_model(model)
        verification = verify_findings(model, report.shifts, report.selections, report.plan,
                                       diagram=report.diagram, settings=self.settings, loss=loss)
        self.report = replace(report, verification=verification)
        return self.report
