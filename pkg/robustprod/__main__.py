from robustprod.cli.main import app

app(prog_name="robustprod")
