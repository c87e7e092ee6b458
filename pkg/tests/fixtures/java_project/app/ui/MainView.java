package app.ui;

import app.service.UserService;
import app.service.OrderService;
import java.util.List;

/**
 * Main window. Mentions app.data.Secret only inside this comment.
 */
public class MainView {
    private final UserService users;
    private final OrderService orders;
    private String title = "see app.data.Repo for storage";

    public MainView(UserService users, OrderService orders) {
        this.users = users;
        this.orders = orders;
    }

    public List<String> names() {
        return users.names(); // not app.data.Hidden either
    }
}
