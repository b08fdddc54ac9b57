from equikt.cli import main

main()
