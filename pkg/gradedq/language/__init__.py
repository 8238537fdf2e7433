from gradedq.language.parser import parse, render_source
from gradedq.language.checks import Options, Session, execute, run_source
from gradedq.language.report import Record, Report, render
