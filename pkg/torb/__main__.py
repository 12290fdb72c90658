from torb.cli import main

main()
