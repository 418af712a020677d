from morreygate.cli import main

main()
