import nox


@nox.session
def tests(session):
    session.install('-r', 'requirements-test.txt')
    session.run('python', '-m', 'unittest', 'discover', '-s', 'tests', '-t', '.')


@nox.session
def slow(session):
    session.install('-r', 'requirements-test.txt')
    session.env['TREEMBED_SLOW'] = '1'
    session.run('python', '-m', 'unittest', 'tests.unit.test_acceptance')
