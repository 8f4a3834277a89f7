from mathwikibase.cli import main

main()
