"""Built-in paragraph corpus used when no corpus file is supplied."""

DEFAULT_TEXT = """\
The brig Dolphin arrived on Tuesday after a passage of eleven days from the windward islands, carrying sugar, rum, and a quantity of fine salt. Her master reports heavy weather off the cape and the loss of a spar, but no damage to the cargo. She will take on freight for the northern ports until Friday next.
Notice is hereby given that the partnership lately subsisting between the subscribers, under the firm of Harwood and Price, is this day dissolved by mutual consent. All persons indebted to the said firm are requested to make payment without delay at the counting house on Bay Street.
For sale at the store of the printer, a small assortment of books and stationery, together with sealing wax, quills, pocket ledgers, and a few reams of good writing paper. Also a parcel of garden seed, fresh from the last ships.
The subscriber informs his friends and the public that he has removed his shop to the corner of King Street, opposite the old market, where he carries on the business of a tailor in all its branches. Orders from the country will be answered with punctuality.
On Thursday last a severe gale of wind was felt in this harbour. Several small craft dragged their anchors and went ashore on the eastern point, and a sloop lying at the wharf parted her fasts and received considerable injury. The weather has since become settled.
The ship Amity, bound for London, will sail with all convenient speed, the greater part of her cargo being already engaged. For freight or passage, having excellent accommodations, apply to the master on board, or to the agents at their office near the custom house.
A meeting of the inhabitants will be held at the court house on Monday evening at six of the clock, to consider the state of the roads leading to the upper parishes, and to fix a subscription for their repair. A full attendance is earnestly requested.
Just imported and to be sold cheap for cash, an assortment of linens, checks, and printed calicoes, mens and womens shoes, coarse hats, cutlery, nails of all sizes, and a few casks of porter. Enquire at the red store on the parade.
We learn from a correspondent in the country that the late rains have greatly refreshed the canes, and that the planters expect a favourable crop. The roads, however, remain heavy, and travelling is slow in the interior districts.
The schooner Betsey, from the bay, brings advices that a large fleet of merchantmen sailed under convoy on the tenth of last month. Several vessels belonging to this port are said to be of the number, and their arrival is daily looked for.
Strayed from the pasture of the subscriber, a small bay horse with a white blaze on the forehead and one white foot. Whoever takes up the said horse and returns him shall be handsomely rewarded for his trouble, and all reasonable charges paid.
The public are cautioned against taking a certain promissory note, drawn in favour of the subscriber and since lost, as payment of the same has been stopped. Any person presenting the said note will be required to shew how it came into his possession.
Wanted immediately, a sober and industrious young man who writes a fair hand and understands accounts, to serve as clerk in a counting house of this town. None need apply without good recommendations from his last employment.
On Sunday evening departed this life, after a short illness, a respectable inhabitant of this parish, aged fifty three years. His remains were interred the following day, attended by a numerous company of friends and acquaintances.
The price of fresh beef in the market this week is somewhat lower than of late, and vegetables are in good plenty. Fish continues scarce, owing to the strong winds which have kept the boats within the reef for several days together.
By a vessel arrived this morning we have papers from the continent to the end of the month. They contain little news of moment, save the usual accounts of the markets and the movement of shipping in the principal ports.
The subscriber has for sale at his yard a quantity of seasoned lumber, shingles, and staves, together with a parcel of good bricks and a few barrels of lime. The whole will be sold low for immediate payment, or exchanged for produce.
A careful housekeeper is wanted in a small family. She must understand plain cooking and the management of poultry, and bring a character from her last place. Enquire of the printer, who will direct to the advertiser.
Yesterday arrived the packet with the mails, after a long passage occasioned by contrary winds. She brings a full freight and several passengers, among them two gentlemen of the faculty and a merchant of considerable dealings.
The commissioners of the highways give notice that the bridge over the creek on the eastern road will be taken up for repair on Monday next. Travellers are advised to use the lower ford until the work is completed, which will require about ten days.
To be let, and entered upon at once, a convenient dwelling house with a good kitchen, cistern, and garden, pleasantly situated near the upper end of the town. The terms are moderate, and may be known by applying next door.
The fishing boats report that a large ship was seen in the offing at sunset, standing to the westward under easy sail. It is supposed she is one of the expected traders, and that she will come in with the morning breeze.
An apprentice is wanted by a cabinet maker of this town, a lad of decent family, not under fourteen years of age. He will be taught the whole of the trade, and treated in every respect as one of the household.
The long drought having ended in plentiful showers, the pastures are again green, and cattle are recovering their condition. Provisions of the country kind are expected shortly to be more reasonable in price than they have been these many weeks.
Public auction on Saturday next, at the stores of the subscribers, the remaining cargo of the ship lately arrived, consisting of flour, butter in firkins, candles, soap, and a small quantity of cheese. The sale to begin at eleven of the clock precisely.
Whereas some evil disposed persons have of late broken the lamps set up in the main street, a reward is offered for discovering the offenders, that they may be dealt with according to law. The watch is directed to be doubly vigilant.
The master of the grammar school gives notice that the vacation ends on the first Monday of the month, when the scholars are expected to return punctually. A few boarders can be accommodated in the masters house on reasonable terms.
A quantity of old copper and ship bread, damaged on the late voyage, will be sold for what it may fetch, at the scale house on the wharf. Purchasers will remove their lots within three days of the sale.
Letters remaining in the post office, if not called for before the departure of the next packet, will be returned according to custom. A list of the same is fixed up at the office door for the information of all concerned.
The theatre announces a performance on Friday evening, being a comedy in five acts with songs between the parts. Tickets may be had at the bar of the tavern and at the office of the printer. The doors open at half past six.
"""
